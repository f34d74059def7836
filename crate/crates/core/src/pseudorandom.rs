//! Expander mixing checks, regular-coloring certificates and the
//! kaleidoscopic pseudo-randomness statistics.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::space::VertexSet;
use crate::spectrum::{self, ColoredCayleyGraph};

/// Added to a certified spectral bound before it is used in mixing checks.
pub const MIXING_SLACK: f64 = 1e-6;

/// Ordered pairs `(u, v)`, `u ∈ B`, `v ∈ C`, with `Q(x_u - x_v) = a`.
pub fn count_bipartite_edges(
    g: &ColoredCayleyGraph,
    a: FieldElement,
    b: &VertexSet,
    c: &VertexSet,
) -> Result<u64> {
    check_universe(g, b)?;
    check_universe(g, c)?;
    if a.is_zero() {
        return Err(Error::InvalidArgument("color must be nonzero"));
    }
    let (outer, inner) = if b.len() <= c.len() { (b, c) } else { (c, b) };
    let mut count = 0u64;
    for &u in outer.members() {
        count += g.neighbors(u, a).filter(|&v| inner.contains(v)).count() as u64;
    }
    Ok(count)
}

fn check_universe(g: &ColoredCayleyGraph, s: &VertexSet) -> Result<()> {
    if s.universe() != g.size() {
        return Err(Error::IndexOutOfRange {
            index: s.universe(),
            size: g.size(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingCheck {
    pub color: FieldElement,
    pub b_size: usize,
    pub c_size: usize,
    pub e_bc: u64,
    /// `(d/n)|B||C|`.
    pub predicted: f64,
    pub lambda: f64,
    /// `λ √(|B||C|)`.
    pub bound: f64,
    pub ok: bool,
}

impl MixingCheck {
    /// `|e(B,C) - (d/n)|B||C|| / √(|B||C|)`, the smallest λ that would pass.
    pub fn normalized_defect(&self) -> f64 {
        let denom = libm::sqrt((self.b_size * self.c_size) as f64);
        if denom == 0.0 {
            0.0
        } else {
            libm::fabs(self.e_bc as f64 - self.predicted) / denom
        }
    }
}

pub fn mixing_check(
    g: &ColoredCayleyGraph,
    a: FieldElement,
    b: &VertexSet,
    c: &VertexSet,
    lambda: f64,
) -> Result<MixingCheck> {
    let e_bc = count_bipartite_edges(g, a, b, c)?;
    let (nb, nc) = (b.len(), c.len());
    let predicted = g.valency(a) as f64 / g.size() as f64 * (nb * nc) as f64;
    let bound = lambda * libm::sqrt((nb * nc) as f64);
    Ok(MixingCheck {
        color: a,
        b_size: nb,
        c_size: nc,
        e_bc,
        predicted,
        lambda,
        bound,
        ok: libm::fabs(e_bc as f64 - predicted) <= bound,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColorCertificate {
    pub color: FieldElement,
    pub valency: usize,
    pub max_nontrivial: f64,
    /// The trivial eigenvalue equals the connection-set size.
    pub regular: bool,
}

/// `(n, d, λ)` data for every color class.
#[derive(Debug, Clone, PartialEq)]
pub struct RcCertificate {
    pub n: usize,
    pub colors: Vec<ColorCertificate>,
    pub d_min: usize,
    pub d_max: usize,
    pub lambda_max: f64,
    pub rc_ok: bool,
}

impl RcCertificate {
    pub fn color(&self, a: FieldElement) -> Option<&ColorCertificate> {
        self.colors.iter().find(|c| c.color == a)
    }

    /// Certified `max_{m≠0}|λ_m|` of color `a` plus [`MIXING_SLACK`].
    pub fn mixing_lambda(&self, a: FieldElement) -> Option<f64> {
        self.color(a).map(|c| c.max_nontrivial + MIXING_SLACK)
    }
}

pub fn certify_rc(g: &ColoredCayleyGraph) -> Result<RcCertificate> {
    let mut colors = Vec::new();
    for a in g.colors() {
        let rep = spectrum::full_spectrum(g, a)?;
        let top = rep.eigenvalues.first().copied().unwrap_or(0.0);
        colors.push(ColorCertificate {
            color: a,
            valency: rep.valency,
            max_nontrivial: rep.max_nontrivial,
            regular: libm::fabs(top - rep.valency as f64) < spectrum::IMAG_TOLERANCE,
        });
    }
    let d_min = colors.iter().map(|c| c.valency).min().unwrap_or(0);
    let d_max = colors.iter().map(|c| c.valency).max().unwrap_or(0);
    let lambda_max = colors.iter().fold(0.0f64, |acc, c| acc.max(c.max_nontrivial));
    let rc_ok = colors.iter().all(|c| c.regular) && lambda_max < d_min as f64;
    Ok(RcCertificate {
        n: g.size(),
        colors,
        d_min,
        d_max,
        lambda_max,
        rc_ok,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KaleidoReport {
    /// `|G| = q^d`; growth along a family is judged by the caller.
    pub vertex_count: usize,
    /// `(color, |E^a|)` with `|E^a| = q^d |S_a| / 2` unordered edges.
    pub edge_counts: Vec<(FieldElement, u64)>,
    /// `max |E^a| / min |E^a|`; `None` when some class is empty.
    pub ratio_max: Option<f64>,
    /// Unordered pairs `x ≠ y` with `Q(x - y) = 0`.
    pub zero_distance_pairs: u64,
    pub total_pairs: u64,
    pub completeness_defect: f64,
    pub k: usize,
    pub n_edges: usize,
    pub constant: f64,
    /// `C |G|^((k-1)/k) |L|^(n/k)`.
    pub threshold_size: f64,
}

/// Size above which every subset should contain every colored pattern with
/// `k` vertices and `n_edges` edges, for `colors` available colors.
pub fn threshold_size(vertex_count: usize, colors: usize, k: usize, n_edges: usize, constant: f64) -> f64 {
    let k = k as f64;
    constant
        * libm::pow(vertex_count as f64, (k - 1.0) / k)
        * libm::pow(colors as f64, n_edges as f64 / k)
}

pub fn kaleido_conditions(g: &ColoredCayleyGraph, k: usize, n_edges: usize, constant: f64) -> Result<KaleidoReport> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2"));
    }
    if n_edges + 1 < k {
        return Err(Error::InvalidArgument("n_edges must be at least k - 1"));
    }
    let n = g.size() as u64;
    let edge_counts: Vec<(FieldElement, u64)> = g
        .colors()
        .map(|a| (a, n * g.valency(a) as u64 / 2))
        .collect();
    let min = edge_counts.iter().map(|e| e.1).min().unwrap_or(0);
    let max = edge_counts.iter().map(|e| e.1).max().unwrap_or(0);
    let ratio_max = (min > 0).then(|| max as f64 / min as f64);
    let zero = g.valency(g.field().zero()) as u64;
    let zero_distance_pairs = n * (zero - 1) / 2;
    let total_pairs = n * (n - 1) / 2;
    let colored: u64 = edge_counts.iter().map(|e| e.1).sum();
    let completeness_defect = if total_pairs == 0 {
        0.0
    } else {
        (total_pairs - colored) as f64 / total_pairs as f64
    };
    Ok(KaleidoReport {
        vertex_count: g.size(),
        edge_counts,
        ratio_max,
        zero_distance_pairs,
        total_pairs,
        completeness_defect,
        k,
        n_edges,
        constant,
        threshold_size: threshold_size(g.size(), g.field().order() as usize - 1, k, n_edges, constant),
    })
}

/// Strictly increasing vertex counts along a family.
pub fn grows(vertex_counts: &[usize]) -> bool {
    vertex_counts.windows(2).all(|w| w[0] < w[1])
}

/// `|e(B,C) - (d/n)|B||C||/√(|B||C|)` maximized over the given pairs, per color.
/// Useful for locating the tightest sampled pair.
pub fn worst_defects(
    g: &ColoredCayleyGraph,
    pairs: &[(VertexSet, VertexSet)],
) -> Result<Vec<(FieldElement, f64)>> {
    let mut out = vec![];
    for a in g.colors() {
        let mut worst = 0.0f64;
        for (b, c) in pairs {
            worst = worst.max(mixing_check(g, a, b, c, 0.0)?.normalized_defect());
        }
        out.push((a, worst));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::space::QuadraticSpace;

    fn graph(p: u32, d: usize) -> ColoredCayleyGraph {
        ColoredCayleyGraph::new(QuadraticSpace::euclidean(Field::new(p, 1, None).unwrap(), d).unwrap())
    }

    #[test]
    fn full_sets_give_n_times_valency() {
        let g = graph(5, 2);
        let all = VertexSet::full(25);
        for a in g.colors() {
            assert_eq!(count_bipartite_edges(&g, a, &all, &all).unwrap(), 25 * g.valency(a) as u64);
            let chk = mixing_check(&g, a, &all, &all, 0.0).unwrap();
            assert_eq!(chk.normalized_defect(), 0.0);
            assert!(chk.ok);
        }
    }

    #[test]
    fn single_vertex_against_neighborhood() {
        let g = graph(5, 2);
        let a = g.field().one();
        let u = 7;
        let b = VertexSet::new(25, [u]).unwrap();
        let c = VertexSet::new(25, g.neighbors(u, a)).unwrap();
        assert_eq!(count_bipartite_edges(&g, a, &b, &c).unwrap(), g.valency(a) as u64);
    }

    #[test]
    fn certificate_f3_plane() {
        let cert = certify_rc(&graph(3, 2)).unwrap();
        assert_eq!(cert.colors.len(), 2);
        assert!(cert.colors.iter().all(|c| c.valency == 4));
        assert!((cert.lambda_max - 2.0).abs() < 1e-9);
        assert!(cert.rc_ok);
    }

    #[test]
    fn empty_color_class_fails_certification() {
        // d = 1, q = 3: x² = 2 has no solution.
        let cert = certify_rc(&graph(3, 1)).unwrap();
        assert_eq!(cert.d_min, 0);
        assert!(!cert.rc_ok);
        let k = kaleido_conditions(&graph(3, 1), 2, 1, 1.0).unwrap();
        assert_eq!(k.ratio_max, None);
    }

    #[test]
    fn kaleido_argument_checks() {
        let g = graph(3, 2);
        assert!(kaleido_conditions(&g, 1, 0, 1.0).is_err());
        assert!(kaleido_conditions(&g, 3, 1, 1.0).is_err());
        let rep = kaleido_conditions(&g, 2, 1, 1.0).unwrap();
        // q = 3: zero sphere is {0}, so the coloring is complete.
        assert_eq!(rep.zero_distance_pairs, 0);
        assert_eq!(rep.completeness_defect, 0.0);
        assert_eq!(rep.total_pairs, 36);
    }

    #[test]
    fn growth() {
        assert!(grows(&[25, 49, 81]));
        assert!(!grows(&[25, 25]));
    }
}

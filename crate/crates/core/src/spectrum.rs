//! Colored Cayley graphs on `F_q^d` and their spectra.
//!
//! Color class `a` is the Cayley graph of `(F_q^d, +)` with connection set
//! `S_a = {x : Q(x) = a}`. The additive characters `e_m(x) = χ(x·m)` are a
//! common eigenbasis of every class, with eigenvalue `λ_m = Σ_{x∈S_a} χ(x·m)`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dft;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::space::QuadraticSpace;

/// Largest imaginary part tolerated before an eigenvalue is declared non-real.
pub const IMAG_TOLERANCE: f64 = 1e-9;
/// Slack added to `2q^((d-1)/2)` when certifying the Ramanujan-type bound.
pub const RAMANUJAN_SLACK: f64 = 1e-6;

/// The complete graph on `F_q^d` colored by `Q(x - y)`.
#[derive(Debug, Clone)]
pub struct ColoredCayleyGraph {
    space: QuadraticSpace,
    /// Indexed by the color's canonical index; entry 0 is the zero sphere.
    spheres: Vec<Vec<usize>>,
}

impl ColoredCayleyGraph {
    pub fn new(space: QuadraticSpace) -> Self {
        let q = space.field().order() as usize;
        let mut spheres = vec![Vec::new(); q];
        for v in 0..space.size() {
            spheres[space.norm(v).index()].push(v);
        }
        ColoredCayleyGraph { space, spheres }
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        self.space.size()
    }

    /// The `q - 1` colors in canonical order.
    pub fn colors(&self) -> impl Iterator<Item = FieldElement> + Clone + '_ {
        self.field().nonzero_elements()
    }

    /// `S_a`, sorted. For `a = 0` this is the zero sphere, origin included.
    pub fn connection_set(&self, a: FieldElement) -> &[usize] {
        &self.spheres[a.index()]
    }

    pub fn valency(&self, a: FieldElement) -> usize {
        self.spheres[a.index()].len()
    }

    /// Color of the pair `{u, v}`, or `None` when `Q(x_u - x_v) = 0`
    /// (which covers `u = v`).
    #[inline]
    pub fn color(&self, u: usize, v: usize) -> Option<FieldElement> {
        let c = self.space.distance(u, v);
        (!c.is_zero()).then_some(c)
    }

    /// Neighbors of `u` in color `a`, i.e. `x_u + S_a`.
    pub fn neighbors(&self, u: usize, a: FieldElement) -> impl Iterator<Item = usize> + '_ {
        self.spheres[a.index()]
            .iter()
            .map(move |&s| self.space.add(u, s))
    }

    fn check_color(&self, a: FieldElement) -> Result<()> {
        if a.is_zero() {
            Err(Error::InvalidArgument("color must be nonzero"))
        } else if a.index() >= self.field().order() as usize {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }
}

/// `Σ_{x∈set} χ(x·m)` with `x·m` the standard dot product.
pub fn character_sum(space: &QuadraticSpace, set: &[usize], m: usize) -> Complex64 {
    let f = space.field();
    let p = f.characteristic();
    let mvec = space.coords(m);
    let mut acc = Complex64::new(0.0, 0.0);
    for &x in set {
        let t = space
            .coords(x)
            .iter()
            .zip(mvec)
            .fold(0u32, |t, (&xi, &mi)| (t + f.trace(f.mul(xi, mi))) % p);
        acc += f.root_of_unity(t);
    }
    acc
}

fn map_range<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Eigenvalue of color class `a` on the character `e_m`.
pub fn eigenvalue(g: &ColoredCayleyGraph, a: FieldElement, m: &[FieldElement]) -> Result<f64> {
    g.check_color(a)?;
    let mi = g.space.vertex_index(m)?;
    let z = character_sum(&g.space, g.connection_set(a), mi);
    if z.im.abs() >= IMAG_TOLERANCE {
        return Err(Error::NonRealEigenvalue {
            m: mi,
            residual: z.im.abs(),
        });
    }
    Ok(z.re)
}

/// Spectrum of one color class.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub color: FieldElement,
    pub valency: usize,
    /// All `q^d` eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// `max_{m≠0} |λ_m|`.
    pub max_nontrivial: f64,
    /// `2q^((d-1)/2)`.
    pub bound: f64,
    pub ramanujan_ok: bool,
    pub max_imag_residual: f64,
}

pub fn ramanujan_bound(q: u32, d: usize) -> f64 {
    2.0 * libm::pow(q as f64, (d as f64 - 1.0) / 2.0)
}

/// All eigenvalues of color class `a` by direct character sums, one per `m`.
pub fn full_spectrum(g: &ColoredCayleyGraph, a: FieldElement) -> Result<SpectrumReport> {
    g.check_color(a)?;
    let set = g.connection_set(a);
    let values = map_range(g.size(), |m| character_sum(&g.space, set, m));
    build_report(g, a, &values)
}

/// Same result as [`full_spectrum`], computed as one `Z_p^{rd}` Fourier
/// transform of the sphere's indicator.
///
/// With `α` the polynomial-basis generator, `Tr(x_i m_i) = Σ_k c_k(x_i) u_k`
/// where `u_k = Σ_l Tr(α^{k+l}) c_l(m_i)`, so `λ_m` is the plain transform
/// evaluated at the digit vector `u(m)`.
pub fn full_spectrum_fast(g: &ColoredCayleyGraph, a: FieldElement) -> Result<SpectrumReport> {
    g.check_color(a)?;
    let f = g.field();
    let (p, r) = (f.characteristic() as usize, f.degree() as usize);
    let d = g.space.dim();
    let n = g.size();

    let mut data = vec![Complex64::new(0.0, 0.0); n];
    for &x in g.connection_set(a) {
        data[x] = Complex64::new(1.0, 0.0);
    }
    dft::transform(&mut data, p, r * d);

    let basis: Vec<FieldElement> = (0..r)
        .map(|k| f.element(p.pow(k as u32)).expect("basis element"))
        .collect();
    let trace_form: Vec<usize> = (0..r * r)
        .map(|kl| f.trace(f.mul(basis[kl / r], basis[kl % r])) as usize)
        .collect();

    let values: Vec<Complex64> = map_range(n, |m| {
        let mut u = 0usize;
        let mut place = 1usize;
        for &mi in g.space.coords(m) {
            let c = f.coeffs(mi);
            for k in 0..r {
                let uk = (0..r).map(|l| trace_form[k * r + l] * c[l] as usize).sum::<usize>() % p;
                u += uk * place;
                place *= p;
            }
        }
        data[u]
    });
    build_report(g, a, &values)
}

fn build_report(g: &ColoredCayleyGraph, a: FieldElement, values: &[Complex64]) -> Result<SpectrumReport> {
    let mut max_imag = 0.0f64;
    for (m, z) in values.iter().enumerate() {
        if z.im.abs() >= IMAG_TOLERANCE {
            return Err(Error::NonRealEigenvalue {
                m,
                residual: z.im.abs(),
            });
        }
        max_imag = max_imag.max(z.im.abs());
    }
    let max_nontrivial = values[1..].iter().fold(0.0f64, |acc, z| acc.max(z.re.abs()));
    let bound = ramanujan_bound(g.field().order(), g.space.dim());
    let mut eigenvalues: Vec<f64> = values.iter().map(|z| z.re).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(SpectrumReport {
        color: a,
        valency: g.valency(a),
        eigenvalues,
        max_nontrivial,
        bound,
        ramanujan_ok: max_nontrivial <= bound + RAMANUJAN_SLACK,
        max_imag_residual: max_imag,
    })
}

/// `F : F_q^d → F_q` as a value table in vertex-index order, plus the target
/// value `j`. The F-distance graph joins `x` and `y` when `F(y - x) = j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FDistanceSpec {
    table: Vec<FieldElement>,
    target: FieldElement,
}

impl FDistanceSpec {
    pub fn new(space: &QuadraticSpace, table: Vec<FieldElement>, target: FieldElement) -> Result<Self> {
        if table.len() != space.size() {
            return Err(Error::TableSize {
                expected: space.size(),
                got: table.len(),
            });
        }
        let q = space.field().order() as usize;
        if target.index() >= q || table.iter().any(|e| e.index() >= q) {
            return Err(Error::FieldMismatch);
        }
        Ok(FDistanceSpec { table, target })
    }

    /// Tabulates `f` at every vertex.
    pub fn from_fn(
        space: &QuadraticSpace,
        f: impl Fn(&[FieldElement]) -> FieldElement,
        target: FieldElement,
    ) -> Result<Self> {
        let table = (0..space.size()).map(|v| f(space.coords(v))).collect();
        Self::new(space, table, target)
    }

    pub fn table(&self) -> &[FieldElement] {
        &self.table
    }

    pub fn target(&self) -> FieldElement {
        self.target
    }

    /// `{x : F(x) = j}` in increasing order.
    pub fn connection_set(&self) -> Vec<usize> {
        (0..self.table.len())
            .filter(|&x| self.table[x] == self.target)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FDistanceReport {
    pub target: FieldElement,
    pub connection_size: usize,
    /// `F(0) = j`, so every vertex carries a loop.
    pub includes_origin: bool,
    /// Connection set closed under negation (undirected graph).
    pub symmetric: bool,
    /// Real eigenvalues when `symmetric`, otherwise eigenvalue moduli;
    /// descending either way.
    pub eigenvalues: Vec<f64>,
    pub lambda_zero: f64,
    /// `max_{m≠0} |λ_m|`.
    pub max_nontrivial: f64,
    pub max_imag_residual: f64,
    /// `max_{m≠0} |λ_m| / q^((d-1)/2)`.
    pub c1: f64,
    /// `|λ_0| / q^(d-1)`.
    pub c2: f64,
    pub bound: f64,
    pub within_bound: bool,
}

pub fn f_distance_spectrum(space: &QuadraticSpace, spec: &FDistanceSpec) -> FDistanceReport {
    let set = spec.connection_set();
    let symmetric = set
        .iter()
        .all(|&x| spec.table[space.sub(0, x)] == spec.target);
    let values = map_range(space.size(), |m| character_sum(space, &set, m));

    let q = space.field().order() as f64;
    let d = space.dim() as f64;
    let max_nontrivial = values[1..].iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let max_imag = values.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    let mut eigenvalues: Vec<f64> = if symmetric {
        values.iter().map(|z| z.re).collect()
    } else {
        values.iter().map(|z| z.norm()).collect()
    };
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    let bound = ramanujan_bound(space.field().order(), space.dim());
    FDistanceReport {
        target: spec.target,
        connection_size: set.len(),
        includes_origin: spec.table[0] == spec.target,
        symmetric,
        eigenvalues,
        lambda_zero: values[0].re,
        max_nontrivial,
        max_imag_residual: max_imag,
        c1: max_nontrivial / libm::pow(q, (d - 1.0) / 2.0),
        c2: values[0].norm() / libm::pow(q, d - 1.0),
        bound,
        within_bound: max_nontrivial <= bound + RAMANUJAN_SLACK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(p: u32, r: u32, d: usize) -> ColoredCayleyGraph {
        ColoredCayleyGraph::new(QuadraticSpace::euclidean(Field::new(p, r, None).unwrap(), d).unwrap())
    }

    #[test]
    fn f3_plane_color_one() {
        let g = graph(3, 1, 2);
        let f = g.field().clone();
        // 1 + 1 + ω + ω² = 1
        let lam = eigenvalue(&g, f.one(), &[f.one(), f.zero()]).unwrap();
        assert!((lam - 1.0).abs() < 1e-12);
        assert_eq!(eigenvalue(&g, f.one(), &[f.zero(), f.zero()]).unwrap(), 4.0);

        let rep = full_spectrum(&g, f.one()).unwrap();
        let expected = [4.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0];
        for (x, y) in rep.eigenvalues.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12, "{:?}", rep.eigenvalues);
        }
        assert!((rep.max_nontrivial - 2.0).abs() < 1e-12);
        assert!(rep.ramanujan_ok);
        assert_eq!(rep.valency, 4);
    }

    #[test]
    fn zero_color_rejected() {
        let g = graph(3, 1, 2);
        assert!(matches!(full_spectrum(&g, g.field().zero()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn fast_path_agrees_in_extension_fields() {
        for &(p, r, d) in &[(3, 2, 2), (3, 3, 1), (5, 2, 1), (7, 1, 2), (3, 1, 3)] {
            let g = graph(p, r, d);
            for a in g.colors() {
                let slow = full_spectrum(&g, a).unwrap();
                let fast = full_spectrum_fast(&g, a).unwrap();
                assert_eq!(slow.valency, fast.valency);
                for (x, y) in slow.eigenvalues.iter().zip(&fast.eigenvalues) {
                    assert!((x - y).abs() < 1e-9, "q={}^{} d={} a={:?}", p, r, d, a);
                }
            }
        }
    }

    #[test]
    fn constant_table_has_trivial_nontrivial_spectrum() {
        let g = graph(5, 1, 2);
        let j = g.field().from_int(3);
        let spec = FDistanceSpec::from_fn(g.space(), |_| j, j).unwrap();
        let rep = f_distance_spectrum(g.space(), &spec);
        assert!(rep.includes_origin && rep.symmetric);
        assert_eq!(rep.connection_size, 25);
        assert!((rep.lambda_zero - 25.0).abs() < 1e-12);
        assert!(rep.max_nontrivial < 1e-9);
        assert!(rep.c1 < 1e-9);
    }

    #[test]
    fn table_size_checked() {
        let g = graph(3, 1, 2);
        let f = g.field();
        assert_eq!(
            FDistanceSpec::new(g.space(), vec![f.zero(); 8], f.one()),
            Err(Error::TableSize { expected: 9, got: 8 })
        );
    }

    #[test]
    fn asymmetric_table_is_flagged() {
        let g = graph(5, 1, 1);
        let f = g.field();
        // F(x) = x: connection set {j} is not closed under negation.
        let spec = FDistanceSpec::from_fn(g.space(), |x| x[0], f.one()).unwrap();
        let rep = f_distance_spectrum(g.space(), &spec);
        assert!(!rep.symmetric);
        assert!(rep.eigenvalues.iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }
}

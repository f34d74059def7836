//! Colored patterns and ordered embedding counts.
//!
//! An ordered embedding of a pattern `H` into a vertex subset `E` is an
//! injective map `f : V(H) → E` with `Q(f(i) - f(j)) = color(i, j)` for every
//! pattern edge. Non-edges of `H` impose nothing (copies are not induced).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::pseudorandom::RcCertificate;
use crate::space::VertexSet;
use crate::spectrum::ColoredCayleyGraph;

/// Patterns above this size are rejected by [`aut_c`].
pub const MAX_AUT_VERTICES: usize = 10;
/// Default cap on `|E|^k` for [`naive_count_oracle`].
pub const NAIVE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredPattern {
    k: usize,
    edges: Vec<(usize, usize, FieldElement)>,
    adj: Vec<Option<FieldElement>>,
}

impl ColoredPattern {
    /// Edges are `(i, j, color)` with `i < j < k`, each pair at most once.
    pub fn new(k: usize, edges: Vec<(usize, usize, FieldElement)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPattern("pattern needs at least one vertex"));
        }
        let mut adj = vec![None; k * k];
        for &(i, j, c) in &edges {
            if !(i < j && j < k) {
                return Err(Error::InvalidPattern("edge endpoints must satisfy i < j < k"));
            }
            if adj[i * k + j].is_some() {
                return Err(Error::InvalidPattern("duplicate edge"));
            }
            adj[i * k + j] = Some(c);
            adj[j * k + i] = Some(c);
        }
        Ok(ColoredPattern { k, edges, adj })
    }

    pub fn single_edge(a: FieldElement) -> Self {
        Self::new(2, vec![(0, 1, a)]).expect("valid pattern")
    }

    /// Path `0 – 1 – … – len`, edge `i` colored `colors[i]`.
    pub fn path(colors: &[FieldElement]) -> Self {
        let edges = colors.iter().enumerate().map(|(i, &c)| (i, i + 1, c)).collect();
        Self::new(colors.len() + 1, edges).expect("valid pattern")
    }

    pub fn triangle(a: FieldElement) -> Self {
        Self::new(3, vec![(0, 1, a), (0, 2, a), (1, 2, a)]).expect("valid pattern")
    }

    /// `k` vertices, no edges.
    pub fn independent(k: usize) -> Result<Self> {
        Self::new(k, Vec::new())
    }

    /// Vertex count.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Edge count.
    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, FieldElement)] {
        &self.edges
    }

    #[inline]
    pub fn color(&self, i: usize, j: usize) -> Option<FieldElement> {
        self.adj[i * self.k + j]
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.k).filter(|&j| self.color(i, j).is_some()).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.k).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Same shape with every color passed through `map`.
    pub fn recolored(&self, map: impl Fn(FieldElement) -> FieldElement) -> Self {
        let edges = self.edges.iter().map(|&(i, j, c)| (i, j, map(c))).collect();
        Self::new(self.k, edges).expect("same shape")
    }
}

/// Number of vertex permutations that preserve the colored edge set.
pub fn aut_c(h: &ColoredPattern) -> Result<u64> {
    if h.k > MAX_AUT_VERTICES {
        return Err(Error::PatternTooLarge(h.k));
    }
    fn extend(h: &ColoredPattern, perm: &mut Vec<usize>, used: &mut [bool]) -> u64 {
        let i = perm.len();
        if i == h.k {
            return 1;
        }
        let mut total = 0;
        for img in 0..h.k {
            if used[img] {
                continue;
            }
            // Degree is preserved by any automorphism.
            if h.degree(i) != h.degree(img) {
                continue;
            }
            if (0..i).all(|j| h.color(i, j) == h.color(img, perm[j])) {
                used[img] = true;
                perm.push(img);
                total += extend(h, perm, used);
                perm.pop();
                used[img] = false;
            }
        }
        total
    }
    Ok(extend(h, &mut Vec::with_capacity(h.k), &mut vec![false; h.k]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingCount {
    pub ordered_count: u128,
    pub aut: u64,
    /// `ordered_count / |Aut_c(H)|`; the division is always exact.
    pub unordered_count: u128,
    pub subset_size: usize,
    pub k: usize,
    pub n: usize,
    /// `|E|^k q^(-n)`.
    pub predicted_main: f64,
    /// Ordered-copy prediction `|E|^k Π_e (d_{c(e)} / q^d)`.
    pub predicted_tool3: f64,
    /// `C q^((d-1)/2 + k-1)`.
    pub threshold: f64,
    pub threshold_met: bool,
    /// `1 ≤ k - 1 ≤ n ≤ d`.
    pub in_theorem_range: bool,
}

fn check_inputs(g: &ColoredCayleyGraph, e: &VertexSet, h: &ColoredPattern) -> Result<()> {
    if e.universe() != g.size() {
        return Err(Error::IndexOutOfRange {
            index: e.universe(),
            size: g.size(),
        });
    }
    let q = g.field().order() as usize;
    for &(_, _, c) in h.edges() {
        if c.is_zero() {
            return Err(Error::ColorZero);
        }
        if c.index() >= q {
            return Err(Error::FieldMismatch);
        }
    }
    Ok(())
}

/// Backtracking plan: non-isolated pattern vertices in most-constrained-first
/// order, each with its constraints against earlier positions.
struct Plan {
    /// `constraints[t]` lists `(earlier position, color)`.
    constraints: Vec<Vec<(usize, FieldElement)>>,
    isolated: usize,
}

impl Plan {
    fn new(h: &ColoredPattern) -> Self {
        let mut remaining: Vec<usize> = (0..h.k).filter(|&i| h.degree(i) > 0).collect();
        let isolated = h.k - remaining.len();
        let mut order: Vec<usize> = Vec::with_capacity(remaining.len());
        while !remaining.is_empty() {
            let (best, _) = remaining
                .iter()
                .enumerate()
                .max_by_key(|&(_, &v)| {
                    let placed = order.iter().filter(|&&u| h.color(u, v).is_some()).count();
                    (placed, h.degree(v), core::cmp::Reverse(v))
                })
                .expect("non-empty");
            order.push(remaining.remove(best));
        }
        let constraints = order
            .iter()
            .enumerate()
            .map(|(t, &v)| {
                order[..t]
                    .iter()
                    .enumerate()
                    .filter_map(|(s, &u)| h.color(u, v).map(|c| (s, c)))
                    .collect()
            })
            .collect();
        Plan { constraints, isolated }
    }

    fn depth(&self) -> usize {
        self.constraints.len()
    }
}

struct Search<'a> {
    g: &'a ColoredCayleyGraph,
    e: &'a VertexSet,
    plan: &'a Plan,
}

impl Search<'_> {
    /// Calls `visit` on every valid image for position `images.len()`.
    #[inline]
    fn for_candidates(&self, images: &[usize], mut visit: impl FnMut(usize) -> bool) {
        let t = images.len();
        let cons = &self.plan.constraints[t];
        let fresh = |v: usize| !images.contains(&v);
        match cons.split_first() {
            None => {
                for &v in self.e.members() {
                    if fresh(v) && !visit(v) {
                        return;
                    }
                }
            }
            Some((&(anchor, c), rest)) => {
                for v in self.g.neighbors(images[anchor], c) {
                    if self.e.contains(v)
                        && fresh(v)
                        && rest.iter().all(|&(s, c2)| self.g.space().distance(v, images[s]) == c2)
                        && !visit(v)
                    {
                        return;
                    }
                }
            }
        }
    }

    /// Completions of `images` to the full non-isolated part, stopping once
    /// `limit` is reached.
    fn count(&self, images: &mut Vec<usize>, limit: u128) -> u128 {
        let t = images.len();
        if t == self.plan.depth() {
            return 1;
        }
        let mut total = 0u128;
        if t + 1 == self.plan.depth() {
            self.for_candidates(images, |_| {
                total += 1;
                total < limit
            });
            return total;
        }
        let mut buf = Vec::new();
        self.for_candidates(images, |v| {
            buf.push(v);
            true
        });
        for v in buf {
            images.push(v);
            total += self.count(images, limit - total);
            images.pop();
            if total >= limit {
                break;
            }
        }
        total
    }
}

fn falling(m: u128, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc * m.saturating_sub(i))
}

/// Ordered embeddings of the non-isolated part, times the placements of the
/// isolated vertices in what is left of `E`.
fn ordered_embeddings(g: &ColoredCayleyGraph, e: &VertexSet, h: &ColoredPattern, limit: u128) -> u128 {
    let plan = Plan::new(h);
    let m = e.len() as u128;
    let rest = falling(m.saturating_sub(plan.depth() as u128), plan.isolated);
    if plan.depth() == 0 {
        return rest;
    }
    if rest == 0 {
        return 0;
    }
    let search = Search { g, e, plan: &plan };
    let per_root = |root: usize| {
        let mut images = Vec::with_capacity(plan.depth());
        images.push(root);
        search.count(&mut images, limit)
    };
    let core_count: u128 = if limit == u128::MAX {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            e.members().par_iter().map(|&r| per_root(r)).sum()
        }
        #[cfg(not(feature = "parallel"))]
        {
            e.members().iter().map(|&r| per_root(r)).sum()
        }
    } else {
        let mut total = 0u128;
        for &r in e.members() {
            total += per_root(r);
            if total >= limit {
                break;
            }
        }
        total
    };
    core_count * rest
}

/// Exact ordered count plus the theorem-level predictions.
///
/// `constant` is the `C` in the size condition `|E| ≥ C q^((d-1)/2 + k-1)`.
pub fn count_embeddings(
    g: &ColoredCayleyGraph,
    e: &VertexSet,
    h: &ColoredPattern,
    constant: f64,
) -> Result<EmbeddingCount> {
    check_inputs(g, e, h)?;
    let ordered_count = ordered_embeddings(g, e, h, u128::MAX);
    let aut = if h.k() <= MAX_AUT_VERTICES { aut_c(h)? } else { 1 };
    debug_assert_eq!(ordered_count % aut as u128, 0);

    let q = g.field().order() as f64;
    let d = g.space().dim();
    let m = e.len() as f64;
    let (k, n) = (h.k(), h.n());
    let mk = libm::pow(m, k as f64);
    let density: f64 = h
        .edges()
        .iter()
        .map(|&(_, _, c)| g.valency(c) as f64 / g.size() as f64)
        .product();
    let threshold = constant * libm::pow(q, (d as f64 - 1.0) / 2.0 + k as f64 - 1.0);
    Ok(EmbeddingCount {
        ordered_count,
        aut,
        unordered_count: ordered_count / aut as u128,
        subset_size: e.len(),
        k,
        n,
        predicted_main: mk * libm::pow(q, -(n as f64)),
        predicted_tool3: mk * density,
        threshold,
        threshold_met: m >= threshold,
        in_theorem_range: 1 <= k.saturating_sub(1) && k - 1 <= n && n <= d,
    })
}

/// Whether `E` holds at least one ordered copy of `H`.
pub fn contains_pattern(g: &ColoredCayleyGraph, e: &VertexSet, h: &ColoredPattern) -> Result<bool> {
    check_inputs(g, e, h)?;
    Ok(ordered_embeddings(g, e, h, 1) > 0)
}

/// Ground truth by enumerating every `k`-tuple of `E`; refuses when
/// `|E|^k > cap`.
pub fn naive_count_oracle(
    g: &ColoredCayleyGraph,
    e: &VertexSet,
    h: &ColoredPattern,
    cap: u128,
) -> Result<u128> {
    check_inputs(g, e, h)?;
    let m = e.len();
    let k = h.k();
    let size = (m as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    if m == 0 {
        return Ok(0);
    }
    let members = e.members();
    let mut digits = vec![0usize; k];
    let mut count = 0u128;
    loop {
        let tuple: Vec<usize> = digits.iter().map(|&i| members[i]).collect();
        let injective = (0..k).all(|i| (0..i).all(|j| tuple[i] != tuple[j]));
        if injective
            && h
                .edges()
                .iter()
                .all(|&(i, j, c)| g.color(tuple[i], tuple[j]) == Some(c))
        {
            count += 1;
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(count);
            }
            digits[pos] += 1;
            if digits[pos] < m {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionReport {
    /// `ordered / (|E|^k q^(-n))`.
    pub ratio_main: f64,
    /// `unordered / (|E|^k Π(d/N) / |Aut_c(H)|)`.
    pub ratio_tool3: f64,
    pub subset_size: usize,
    /// `λ (N/d)^Δ` with the certified `λ` and the smallest valency.
    pub tool3_required_size: f64,
    pub tool3_size_met: bool,
    pub threshold_met: bool,
    pub in_theorem_range: bool,
}

pub fn prediction_report(count: &EmbeddingCount, h: &ColoredPattern, cert: &RcCertificate) -> PredictionReport {
    let unordered_prediction = count.predicted_tool3 / count.aut as f64;
    let required = if cert.d_min == 0 {
        f64::INFINITY
    } else {
        cert.lambda_max * libm::pow(cert.n as f64 / cert.d_min as f64, h.max_degree() as f64)
    };
    PredictionReport {
        ratio_main: count.ordered_count as f64 / count.predicted_main,
        ratio_tool3: count.unordered_count as f64 / unordered_prediction,
        subset_size: count.subset_size,
        tool3_required_size: required,
        tool3_size_met: count.subset_size as f64 >= required,
        threshold_met: count.threshold_met,
        in_theorem_range: count.in_theorem_range,
    }
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
    fn automorphism_counts() {
        let f = Field::new(5, 1, None).unwrap();
        let (c1, c2) = (f.from_int(1), f.from_int(2));
        assert_eq!(aut_c(&ColoredPattern::triangle(c1)).unwrap(), 6);
        assert_eq!(aut_c(&ColoredPattern::path(&[c1, c2])).unwrap(), 1);
        assert_eq!(aut_c(&ColoredPattern::path(&[c1, c1])).unwrap(), 2);
        assert_eq!(aut_c(&ColoredPattern::single_edge(c1)).unwrap(), 2);
        assert_eq!(aut_c(&ColoredPattern::independent(4).unwrap()).unwrap(), 24);
        assert_eq!(
            aut_c(&ColoredPattern::independent(11).unwrap()),
            Err(Error::PatternTooLarge(11))
        );
    }

    #[test]
    fn pattern_validation() {
        let c = Field::new(3, 1, None).unwrap().one();
        assert!(ColoredPattern::new(0, vec![]).is_err());
        assert!(ColoredPattern::new(2, vec![(1, 0, c)]).is_err());
        assert!(ColoredPattern::new(2, vec![(0, 2, c)]).is_err());
        assert!(ColoredPattern::new(3, vec![(0, 1, c), (0, 1, c)]).is_err());
    }

    #[test]
    fn single_edge_full_space() {
        let g = graph(3, 2);
        let a = g.field().one();
        let all = VertexSet::full(9);
        let c = count_embeddings(&g, &all, &ColoredPattern::single_edge(a), 1.0).unwrap();
        assert_eq!(c.ordered_count, 36);
        assert_eq!(c.unordered_count, 18);
    }

    #[test]
    fn edgeless_patterns_count_injections() {
        let g = graph(5, 2);
        let e = VertexSet::new(25, [0, 3, 5, 9, 17, 22, 24]).unwrap();
        for k in 1..=4 {
            let h = ColoredPattern::independent(k).unwrap();
            let c = count_embeddings(&g, &e, &h, 1.0).unwrap();
            assert_eq!(c.ordered_count, falling(7, k));
        }
        let empty = VertexSet::new(25, []).unwrap();
        let h = ColoredPattern::independent(2).unwrap();
        assert_eq!(count_embeddings(&g, &empty, &h, 1.0).unwrap().ordered_count, 0);
        assert_eq!(naive_count_oracle(&g, &empty, &h, NAIVE_CAP).unwrap(), 0);
        let one = ColoredPattern::independent(1).unwrap();
        assert_eq!(naive_count_oracle(&g, &e, &one, NAIVE_CAP).unwrap(), 7);
    }

    #[test]
    fn color_zero_rejected() {
        let g = graph(5, 2);
        let h = ColoredPattern::single_edge(g.field().zero());
        assert_eq!(
            count_embeddings(&g, &VertexSet::full(25), &h, 1.0),
            Err(Error::ColorZero)
        );
    }

    #[test]
    fn oracle_cap() {
        let g = graph(5, 2);
        let h = ColoredPattern::independent(6).unwrap();
        assert!(matches!(
            naive_count_oracle(&g, &VertexSet::full(25), &h, NAIVE_CAP),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn isolated_vertex_mixed_with_edge() {
        let g = graph(5, 2);
        let a = g.field().one();
        let h = ColoredPattern::new(3, vec![(0, 2, a)]).unwrap();
        let e = VertexSet::new(25, (0..25).step_by(2)).unwrap();
        let fast = count_embeddings(&g, &e, &h, 1.0).unwrap().ordered_count;
        assert_eq!(fast, naive_count_oracle(&g, &e, &h, NAIVE_CAP).unwrap());
        assert!(!count_embeddings(&g, &e, &h, 1.0).unwrap().in_theorem_range);
    }

    #[test]
    fn contains_matches_count() {
        let g = graph(5, 2);
        let a = g.field().one();
        let tri = ColoredPattern::triangle(a);
        let all = VertexSet::full(25);
        let has = count_embeddings(&g, &all, &tri, 1.0).unwrap().ordered_count > 0;
        assert_eq!(contains_pattern(&g, &all, &tri).unwrap(), has);
        let small = VertexSet::new(25, [0, 1]).unwrap();
        assert!(!contains_pattern(&g, &small, &tri).unwrap());
    }
}

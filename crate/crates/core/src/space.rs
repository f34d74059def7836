//! The quadratic space `(F_q^d, Q)`.
//!
//! Vectors are addressed by vertex index: coordinate `i` contributes
//! `index(x_i) · q^i`, so coordinate 0 is least significant. Because field
//! elements are themselves base-`p` coefficient strings, a vertex index is
//! also the base-`p` digit string of the vector viewed as an element of
//! `Z_p^{rd}`; the DFT fast path relies on this.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Largest supported `q^d`.
pub const MAX_VERTICES: usize = 1 << 22;

/// A quadratic form `Q(x) = xᵀ M x` given by its symmetric gram matrix `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    dim: usize,
    gram: Vec<FieldElement>,
}

impl QuadraticForm {
    /// Validates symmetry and non-degeneracy (`det M ≠ 0`).
    pub fn new(field: &Field, dim: usize, gram: Vec<FieldElement>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1"));
        }
        if gram.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: gram.len(),
            });
        }
        if gram.iter().any(|g| g.index() >= field.order() as usize) {
            return Err(Error::FieldMismatch);
        }
        for i in 0..dim {
            for j in 0..i {
                if gram[i * dim + j] != gram[j * dim + i] {
                    return Err(Error::AsymmetricGram);
                }
            }
        }
        let form = QuadraticForm { dim, gram };
        if form.determinant(field).is_zero() {
            return Err(Error::DegenerateForm);
        }
        Ok(form)
    }

    /// `x_1² + … + x_d²`.
    pub fn identity(field: &Field, dim: usize) -> Result<Self> {
        Self::diagonal(field, &vec![field.one(); dim])
    }

    pub fn diagonal(field: &Field, diag: &[FieldElement]) -> Result<Self> {
        let dim = diag.len();
        let mut gram = vec![field.zero(); dim * dim];
        for (i, &g) in diag.iter().enumerate() {
            gram[i * dim + i] = g;
        }
        Self::new(field, dim, gram)
    }

    /// `x_1² + … + x_{d-1}² + g·x_d²` with `g` the smallest non-square.
    /// Its discriminant differs from the identity form's, so the two are
    /// inequivalent.
    pub fn twisted(field: &Field, dim: usize) -> Result<Self> {
        let mut diag = vec![field.one(); dim];
        if let Some(last) = diag.last_mut() {
            *last = field.nonresidue();
        }
        Self::diagonal(field, &diag)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major gram matrix.
    pub fn gram(&self) -> &[FieldElement] {
        &self.gram
    }

    pub fn evaluate(&self, field: &Field, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(field, x))
    }

    fn eval_unchecked(&self, field: &Field, x: &[FieldElement]) -> FieldElement {
        let d = self.dim;
        let mut acc = field.zero();
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            let row = self.gram[i * d..(i + 1) * d]
                .iter()
                .zip(x)
                .fold(field.zero(), |row, (&g, &xj)| field.add(row, field.mul(g, xj)));
            acc = field.add(acc, field.mul(x[i], row));
        }
        acc
    }

    /// Determinant by Gaussian elimination over `F_q`.
    pub fn determinant(&self, field: &Field) -> FieldElement {
        let d = self.dim;
        let mut m = self.gram.clone();
        let mut det = field.one();
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| !m[r * d + col].is_zero()) else {
                return field.zero();
            };
            if pivot != col {
                for k in 0..d {
                    m.swap(pivot * d + k, col * d + k);
                }
                det = field.neg(det);
            }
            let pv = m[col * d + col];
            det = field.mul(det, pv);
            let pinv = field.inv(pv).expect("pivot is nonzero");
            for r in col + 1..d {
                let factor = field.mul(m[r * d + col], pinv);
                if factor.is_zero() {
                    continue;
                }
                for k in col..d {
                    let t = field.mul(factor, m[col * d + k]);
                    m[r * d + k] = field.sub(m[r * d + k], t);
                }
            }
        }
        det
    }
}

/// `{x : Q(x) = radius}` as vertex indices in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sphere {
    pub radius: FieldElement,
    pub points: Vec<usize>,
}

impl Sphere {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn vectors<'a>(&'a self, space: &'a QuadraticSpace) -> impl Iterator<Item = &'a [FieldElement]> + 'a {
        self.points.iter().map(move |&v| space.coords(v))
    }
}

/// Ordered-pair statistics for one distance `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairs {
    pub distance: FieldElement,
    /// `|{(x, y) : Q(x - y) = t}|`.
    pub count: u128,
    pub sphere_size: usize,
    /// `count / q^(2d-1)`.
    pub normalized: f64,
    /// `count / (2 q^(2d-1))`, reported only for `d = 2, t = 0`.
    pub normalized_double: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct QuadraticSpace {
    field: Field,
    form: QuadraticForm,
    size: usize,
    place: Vec<usize>,
    coords: Vec<FieldElement>,
    norms: Vec<FieldElement>,
    sphere_sizes: Vec<usize>,
}

impl QuadraticSpace {
    pub fn new(field: Field, form: QuadraticForm) -> Result<Self> {
        let d = form.dim();
        let q = field.order() as usize;
        let mut size = 1usize;
        let mut place = Vec::with_capacity(d);
        for _ in 0..d {
            place.push(size);
            size = size
                .checked_mul(q)
                .filter(|&s| s <= MAX_VERTICES)
                .ok_or(Error::TooLarge {
                    size: (q as u128).saturating_pow(d as u32),
                    cap: MAX_VERTICES as u128,
                })?;
        }
        let mut coords = Vec::with_capacity(size * d);
        for v in 0..size {
            for &pl in &place {
                coords.push(field.element((v / pl) % q).expect("digit below q"));
            }
        }
        let mut norms = Vec::with_capacity(size);
        let mut sphere_sizes = vec![0usize; q];
        for v in 0..size {
            let n = form.eval_unchecked(&field, &coords[v * d..(v + 1) * d]);
            sphere_sizes[n.index()] += 1;
            norms.push(n);
        }
        Ok(QuadraticSpace {
            field,
            form,
            size,
            place,
            coords,
            norms,
            sphere_sizes,
        })
    }

    /// `(F_q^d, x_1² + … + x_d²)`.
    pub fn euclidean(field: Field, dim: usize) -> Result<Self> {
        let form = QuadraticForm::identity(&field, dim)?;
        Self::new(field, form)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// Number of vertices, `q^d`.
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn coords(&self, v: usize) -> &[FieldElement] {
        let d = self.dim();
        &self.coords[v * d..(v + 1) * d]
    }

    pub fn vertex_index(&self, x: &[FieldElement]) -> Result<usize> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let q = self.field.order() as usize;
        x.iter().zip(&self.place).try_fold(0, |acc, (e, &w)| {
            if e.index() >= q {
                Err(Error::FieldMismatch)
            } else {
                Ok(acc + e.index() * w)
            }
        })
    }

    pub fn index_vertex(&self, i: usize) -> Result<Vec<FieldElement>> {
        self.check_index(i)?;
        Ok(self.coords(i).to_vec())
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.size {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                size: self.size,
            })
        }
    }

    pub fn evaluate(&self, x: &[FieldElement]) -> Result<FieldElement> {
        self.form.evaluate(&self.field, x)
    }

    /// `Q` of the vertex with index `v`.
    #[inline]
    pub fn norm(&self, v: usize) -> FieldElement {
        self.norms[v]
    }

    /// Index of `x_u - x_v`.
    #[inline]
    pub fn sub(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.coords(u), self.coords(v));
        let mut out = 0;
        for i in 0..a.len() {
            out += self.field.sub(a[i], b[i]).index() * self.place[i];
        }
        out
    }

    /// Index of `x_u + x_v`.
    #[inline]
    pub fn add(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.coords(u), self.coords(v));
        let mut out = 0;
        for i in 0..a.len() {
            out += self.field.add(a[i], b[i]).index() * self.place[i];
        }
        out
    }

    /// Index of `t · x_v`.
    pub fn scale(&self, t: FieldElement, v: usize) -> usize {
        self.coords(v)
            .iter()
            .zip(&self.place)
            .map(|(&c, &w)| self.field.mul(t, c).index() * w)
            .sum()
    }

    /// `Q(x_u - x_v)`.
    #[inline]
    pub fn distance(&self, u: usize, v: usize) -> FieldElement {
        self.norms[self.sub(u, v)]
    }

    /// Standard dot product `x_u · x_v` (not the polarization of `Q`).
    #[inline]
    pub fn dot(&self, u: usize, v: usize) -> FieldElement {
        let (a, b) = (self.coords(u), self.coords(v));
        let f = &self.field;
        a.iter()
            .zip(b)
            .fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
    }

    pub fn sphere_size(&self, a: FieldElement) -> usize {
        self.sphere_sizes[a.index()]
    }

    pub fn sphere(&self, a: FieldElement) -> Sphere {
        let points = (0..self.size).filter(|&v| self.norms[v] == a).collect();
        Sphere { radius: a, points }
    }

    pub fn pair_count(&self, t: FieldElement) -> Pairs {
        let q = self.field.order() as f64;
        let d = self.dim() as i32;
        let sphere_size = self.sphere_size(t);
        let count = self.size as u128 * sphere_size as u128;
        let scale = libm::pow(q, (2 * d - 1) as f64);
        Pairs {
            distance: t,
            count,
            sphere_size,
            normalized: count as f64 / scale,
            normalized_double: (d == 2 && t.is_zero()).then(|| count as f64 / (2.0 * scale)),
        }
    }
}

/// A duplicate-free set of vertex indices with an O(1) membership bitmap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    universe: usize,
    members: Vec<usize>,
    bits: Vec<u64>,
}

impl VertexSet {
    /// Members are stored sorted; out-of-range or repeated indices are rejected.
    pub fn new(universe: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = vec![0u64; universe.div_ceil(64)];
        let mut members = Vec::new();
        for v in indices {
            if v >= universe {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    size: universe,
                });
            }
            let (w, b) = (v / 64, 1u64 << (v % 64));
            if bits[w] & b != 0 {
                return Err(Error::DuplicateVertex(v));
            }
            bits[w] |= b;
            members.push(v);
        }
        members.sort_unstable();
        Ok(VertexSet {
            universe,
            members,
            bits,
        })
    }

    pub fn full(universe: usize) -> Self {
        Self::new(universe, 0..universe).expect("range is valid")
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.bits[v / 64] & (1u64 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

//! Arithmetic in `F_q`, `q = p^r` with `p` odd.
//!
//! Elements are stored as their canonical index: the polynomial-basis
//! coefficients `c_0 + c_1 α + … + c_{r-1} α^{r-1}` read as the base-`p`
//! number `c_0 + c_1 p + … + c_{r-1} p^{r-1}`. Enumerating indices `0..q`
//! therefore walks the field in base-`p` coefficient order with the constant
//! term least significant. Multiplication goes through discrete log tables
//! built once per field from a primitive element.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported field order. All tables are `O(q)` except the optional
/// addition table, which is built only for `q <= ADD_TABLE_MAX`.
pub const MAX_ORDER: u64 = 1 << 16;
const ADD_TABLE_MAX: u32 = 1024;

/// An element of some [`Field`], identified by its canonical index.
///
/// Elements do not carry a reference to their field; every operation goes
/// through the owning `Field`, which rejects out-of-range indices at the
/// construction boundary (`Field::element`, `Field::from_coeffs`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// Position of the element in canonical order.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone)]
pub struct Field {
    p: u32,
    r: u32,
    q: u32,
    /// `c_0, …, c_{r-1}, 1`; `None` for prime fields.
    modulus: Option<Vec<u32>>,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    trace: Vec<u32>,
    add_table: Option<Vec<u16>>,
    roots: Vec<Complex64>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `F_{p^r}`.
    ///
    /// `modulus` is the full coefficient list `[c_0, …, c_{r-1}, 1]` of a
    /// monic degree-`r` polynomial. When it is omitted for `r >= 2` the
    /// smallest monic irreducible (coefficients read as a base-`p` number,
    /// constant term least significant) is used. For `r = 1` a supplied
    /// modulus is validated and then ignored.
    pub fn new(p: u32, r: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::InvalidDegree);
        }
        let q = (p as u64).checked_pow(r).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u32;

        if let Some(m) = modulus {
            let ok = m.len() == r as usize + 1 && m[r as usize] == 1 && m.iter().all(|&c| c < p);
            if !ok {
                return Err(Error::InvalidModulus { expected: r });
            }
        }
        let modulus = if r == 1 {
            None
        } else {
            let m = match modulus {
                Some(m) => {
                    if !is_irreducible(m, p) {
                        return Err(Error::ReducibleModulus { p });
                    }
                    m.to_vec()
                }
                None => smallest_irreducible(p, r),
            };
            Some(m)
        };

        let mut pow_p = Vec::with_capacity(r as usize + 1);
        let mut acc = 1u32;
        for _ in 0..=r {
            pow_p.push(acc);
            acc = acc.saturating_mul(p);
        }

        let slow = SlowArith {
            p,
            r,
            modulus: modulus.as_deref(),
        };
        let (exp, log) = discrete_log_tables(&slow, q);

        let neg = (0..q).map(|a| slow.neg(a)).collect::<Vec<_>>();

        let add_table = (q <= ADD_TABLE_MAX).then(|| {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in a..q {
                    let s = slow.add(a, b) as u16;
                    t[(a * q + b) as usize] = s;
                    t[(b * q + a) as usize] = s;
                }
            }
            t
        });

        let roots = (0..p)
            .map(|t| {
                let theta = 2.0 * PI * t as f64 / p as f64;
                Complex64::new(libm::cos(theta), libm::sin(theta))
            })
            .collect();

        let mut field = Field {
            p,
            r,
            q,
            modulus,
            pow_p,
            exp,
            log,
            neg,
            trace: Vec::new(),
            add_table,
            roots,
        };
        field.trace = (0..q).map(|y| field.trace_slow(FieldElement(y))).collect();
        Ok(field)
    }

    /// Characteristic `p`.
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Extension degree `r`.
    pub fn degree(&self) -> u32 {
        self.r
    }

    /// Order `q = p^r`.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Element with canonical index `index`.
    pub fn element(&self, index: usize) -> Result<FieldElement> {
        if index < self.q as usize {
            Ok(FieldElement(index as u32))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Element from polynomial-basis coordinates `[c_0, …, c_{r-1}]`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElement(
            coeffs
                .iter()
                .zip(&self.pow_p)
                .map(|(&c, &w)| c * w)
                .sum(),
        ))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        (0..self.r as usize)
            .map(|k| (a.0 / self.pow_p[k]) % self.p)
            .collect()
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    /// Nonzero elements in canonical order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.exp[1 % self.exp.len()])
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_table {
            Some(t) => FieldElement(t[a.index() * self.q as usize + b.index()] as u32),
            None => FieldElement(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let e = self.log[a.index()] + self.log[b.index()];
        let n = self.q - 1;
        FieldElement(self.exp[(if e >= n { e - n } else { e }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(FieldElement(self.exp[((n - self.log[a.index()]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement(1);
        }
        if a.0 == 0 {
            return FieldElement(0);
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a.index()] as u64 * (e % n)) % n;
        FieldElement(self.exp[l as usize])
    }

    /// Whether `a` is a square (zero counts as a square).
    pub fn is_square(&self, a: FieldElement) -> bool {
        a.0 == 0 || self.log[a.index()].is_multiple_of(2)
    }

    /// Smallest non-square in canonical order.
    pub fn nonresidue(&self) -> FieldElement {
        self.nonzero_elements()
            .find(|&a| !self.is_square(a))
            .expect("odd-order fields have non-squares")
    }

    /// Absolute trace `y + y^p + … + y^{p^{r-1}}`, as a residue in `[0, p)`.
    #[inline]
    pub fn trace(&self, y: FieldElement) -> u32 {
        self.trace[y.index()]
    }

    /// The additive character `exp(2πi·Tr(s)/p)`.
    #[inline]
    pub fn add_char(&self, s: FieldElement) -> Complex64 {
        self.roots[self.trace(s) as usize]
    }

    /// `exp(2πi·t/p)` for a residue `t`.
    #[inline]
    pub fn root_of_unity(&self, t: u32) -> Complex64 {
        self.roots[(t % self.p) as usize]
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut out = 0;
        for &w in &self.pow_p[..self.r as usize] {
            out += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
        }
        out
    }

    fn trace_slow(&self, y: FieldElement) -> u32 {
        let mut acc = FieldElement(0);
        let mut term = y;
        for _ in 0..self.r {
            acc = self.add(acc, term);
            term = self.pow(term, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime field");
        acc.0
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic straight from the polynomial representation, used only while
/// building the lookup tables.
struct SlowArith<'a> {
    p: u32,
    r: u32,
    modulus: Option<&'a [u32]>,
}

impl SlowArith<'_> {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.r)
            .map(|_| {
                let c = a % self.p;
                a /= self.p;
                c
            })
            .collect()
    }

    fn undigits(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.undigits(&s)
    }

    fn neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&c| (self.p - c) % self.p)
            .collect();
        self.undigits(&s)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let Some(m) = self.modulus else {
            return ((a as u64 * b as u64) % p) as u32;
        };
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.r as usize - 1];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        let m: Vec<u64> = m.iter().map(|&c| c as u64).collect();
        let rem = poly_rem(prod, &m, p);
        let mut out: Vec<u32> = rem.iter().map(|&c| c as u32).collect();
        out.resize(self.r as usize, 0);
        self.undigits(&out)
    }
}

fn discrete_log_tables(arith: &SlowArith<'_>, q: u32) -> (Vec<u32>, Vec<u32>) {
    let n = q - 1;
    for g in 1..q {
        let mut exp = Vec::with_capacity(n as usize);
        let mut x = 1u32;
        loop {
            exp.push(x);
            x = arith.mul(x, g);
            if x == 1 || exp.len() > n as usize {
                break;
            }
        }
        if exp.len() == n as usize {
            let mut log = vec![u32::MAX; q as usize];
            for (k, &v) in exp.iter().enumerate() {
                log[v as usize] = k as u32;
            }
            return (exp, log);
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

/// Remainder of `a` modulo a monic `m`, coefficients mod `p`, low degree first.
fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap() % p;
        if lead != 0 {
            let off = a.len() - dm;
            for (k, &c) in m[..dm].iter().enumerate() {
                a[off + k] = (a[off + k] + (p - lead) * c) % p;
            }
        }
    }
    a
}

/// Exhaustive search for a monic factor of degree `1..=deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    let m64: Vec<u64> = m.iter().map(|&c| c as u64).collect();
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(k + 1);
            let mut t = idx;
            for _ in 0..k {
                f.push(t % p as u64);
                t /= p as u64;
            }
            f.push(1);
            if poly_rem(m64.clone(), &f, p as u64).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    let count = (p as u64).pow(r);
    for idx in 0..count {
        let mut m = Vec::with_capacity(r as usize + 1);
        let mut t = idx;
        for _ in 0..r {
            m.push((t % p as u64) as u32);
            t /= p as u64;
        }
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Field {
        Field::new(3, 2, Some(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn prime_field_f3() {
        let f = Field::new(3, 1, None).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.modulus(), None);
        let two = f.from_int(2);
        assert_eq!(f.add(two, two), f.one());
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(Field::new(2, 1, None), Err(Error::EvenCharacteristic));
        assert_eq!(Field::new(9, 1, None), Err(Error::NotPrime(9)));
        assert_eq!(Field::new(1, 1, None), Err(Error::NotPrime(1)));
        assert_eq!(Field::new(3, 0, None), Err(Error::InvalidDegree));
        // x^2 + 2 = (x - 1)(x + 1) over F_3
        assert_eq!(
            Field::new(3, 2, Some(&[2, 0, 1])),
            Err(Error::ReducibleModulus { p: 3 })
        );
        assert_eq!(
            Field::new(3, 2, Some(&[1, 0, 2])),
            Err(Error::InvalidModulus { expected: 2 })
        );
        assert!(matches!(Field::new(3, 20, None), Err(Error::FieldTooLarge(_))));
    }

    #[test]
    fn default_modulus_is_smallest_irreducible() {
        assert_eq!(Field::new(3, 2, None).unwrap().modulus(), Some(&[1, 0, 1][..]));
        // x^3 + 2x + 1 is the first cubic over F_3 without a root
        assert_eq!(Field::new(3, 3, None).unwrap().modulus(), Some(&[1, 2, 0, 1][..]));
        assert_eq!(Field::new(5, 2, None).unwrap().modulus(), Some(&[2, 0, 1][..]));
    }

    #[test]
    fn f9_alpha_squared_is_minus_one() {
        let f = f9();
        let alpha = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(alpha, alpha), f.from_coeffs(&[2, 0]).unwrap());
        assert_eq!(f.trace(alpha), 0);
        assert_eq!(f.trace(f.one()), 2);
    }

    #[test]
    fn inverse_and_division_by_zero() {
        let f = f9();
        assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
        for a in f.nonzero_elements() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn element_bounds() {
        let f = f9();
        assert_eq!(f.element(9), Err(Error::FieldMismatch));
        assert_eq!(f.from_coeffs(&[1]), Err(Error::FieldMismatch));
        assert_eq!(f.from_coeffs(&[3, 0]), Err(Error::FieldMismatch));
        assert_eq!(f.coeffs(f.element(7).unwrap()), vec![1, 2]);
    }

    #[test]
    fn add_char_prime_field() {
        let f = Field::new(3, 1, None).unwrap();
        let w = f.add_char(f.one());
        assert!((w.re + 0.5).abs() < 1e-15);
        assert!((w.im - (3f64).sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(f.add_char(f.zero()), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn digit_addition_matches_table() {
        // q = 3^7 is above the table cutoff.
        let big = Field::new(3, 7, None).unwrap();
        assert!(big.add_table.is_none());
        let a = big.element(1234).unwrap();
        let b = big.element(2000).unwrap();
        let ca = big.coeffs(a);
        let cb = big.coeffs(b);
        let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 3).collect();
        assert_eq!(big.add(a, b), big.from_coeffs(&sum).unwrap());
        assert_eq!(big.sub(big.add(a, b), b), a);
    }
}

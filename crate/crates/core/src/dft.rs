//! Fourier transform over the elementary abelian group `Z_p^n`.
//!
//! An array of length `p^n` is read with axis `t` at stride `p^t`. The
//! transform `f̂(u) = Σ_x f(x) ω^{x·u}`, `ω = e^{2πi/p}`, is applied one axis
//! at a time with a direct length-`p` transform on each line, for a total of
//! `n · p^{n+1}` complex multiply-adds.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// In-place `Z_p^n` transform with kernel `ω^{+x·u}`.
///
/// # Panics
///
/// If `data.len()` is not `p^n` for the given `p` and `n`.
pub fn transform(data: &mut [Complex64], p: usize, n: usize) {
    assert_eq!(Some(data.len()), p.checked_pow(n as u32), "length must be p^n");
    let roots: Vec<Complex64> = (0..p)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / p as f64;
            Complex64::new(libm::cos(t), libm::sin(t))
        })
        .collect();
    let mut line = vec![Complex64::new(0.0, 0.0); p];
    let mut stride = 1;
    for _ in 0..n {
        let block = stride * p;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (u, out) in line.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..p {
                        acc += data[start + x * stride] * roots[(x * u) % p];
                    }
                    *out = acc;
                }
                for (u, &v) in line.iter().enumerate() {
                    data[start + u * stride] = v;
                }
            }
        }
        stride = block;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(data: &[Complex64], p: usize, n: usize) -> Vec<Complex64> {
        let digits = |mut v: usize| {
            (0..n)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect::<Vec<_>>()
        };
        (0..data.len())
            .map(|u| {
                let du = digits(u);
                data.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (x, &f)| {
                    let dx = digits(x);
                    let dot: usize = dx.iter().zip(&du).map(|(a, b)| a * b).sum();
                    let t = 2.0 * PI * (dot % p) as f64 / p as f64;
                    acc + f * Complex64::new(libm::cos(t), libm::sin(t))
                })
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        for &(p, n) in &[(3usize, 2usize), (5, 2), (3, 3), (7, 1)] {
            let len = p.pow(n as u32);
            let data: Vec<Complex64> = (0..len)
                .map(|i| Complex64::new(((i * 7 + 3) % 11) as f64, ((i * 5) % 4) as f64))
                .collect();
            let mut fast = data.clone();
            transform(&mut fast, p, n);
            for (a, b) in fast.iter().zip(naive(&data, p, n)) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn delta_transforms_to_constant() {
        let mut data = vec![Complex64::new(0.0, 0.0); 27];
        data[0] = Complex64::new(1.0, 0.0);
        transform(&mut data, 3, 3);
        assert!(data.iter().all(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-12));
    }
}

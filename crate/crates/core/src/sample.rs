//! Seeded vertex-subset sampling.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`.
//! A subset of size `m` from `[0, n)` is the first `m` entries of a partial
//! Fisher–Yates shuffle of `0..n` (step `i` swaps `i` with a uniform index in
//! `i..n`), returned sorted.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn size_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn subset(&mut self, n: usize, size: usize) -> Result<Vec<usize>> {
        if size > n {
            return Err(Error::InvalidArgument("subset larger than the vertex set"));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = self.rng.gen_range(i..n);
            pool.swap(i, j);
        }
        pool.truncate(size);
        pool.sort_unstable();
        Ok(pool)
    }
}

/// One subset of `size` vertices drawn with a fresh generator.
pub fn sample_subset(n: usize, size: usize, seed: u64) -> Result<Vec<usize>> {
    Sampler::new(seed).subset(n, size)
}

/// `count` pairs `(B, C)`; each side gets an independent uniform size in
/// `1..=n` and then an independent subset of that size.
pub fn mixing_pairs(n: usize, count: usize, seed: u64) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut s = Sampler::new(seed);
    (0..count)
        .map(|_| {
            let bs = s.size_in(1, n);
            let cs = s.size_in(1, n);
            let b = s.subset(n, bs).expect("size within range");
            let c = s.subset(n, cs).expect("size within range");
            (b, c)
        })
        .collect()
}

//! Finite Euclidean graphs over `F_q^d`.
//!
//! The complete graph on `F_q^d` is colored by `Q(x - y)` for a non-degenerate
//! quadratic form `Q`; every color class is a Cayley graph of the additive
//! group, so its eigenvalues are additive character sums over a sphere. This
//! crate computes those spectra exactly (up to double rounding), certifies the
//! regular-coloring and mixing properties they imply, and counts colored
//! pattern embeddings inside vertex subsets.
//!
//! The crate is `no_std` (with `alloc`). The `parallel` feature pulls in `std`
//! and `rayon` to spread spectrum and counting work over threads; results are
//! identical with and without it.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;

pub mod dft;
pub mod embed;
pub mod field;
pub mod pseudorandom;
pub mod sample;
pub mod space;
pub mod spectrum;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use space::{Pairs, QuadraticForm, QuadraticSpace, Sphere, VertexSet};
pub use spectrum::{ColoredCayleyGraph, FDistanceReport, FDistanceSpec, SpectrumReport};

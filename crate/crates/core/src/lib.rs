//! Exact arithmetic for increments of partially exchangeable random partitions.
//!
//! A partition of `{1, ..., n}` with blocks listed in order of appearance has an
//! increment sequence: bit `i` is 1 iff `i` is the smallest element of its block.
//! For partially exchangeable partition laws (probability depends only on the
//! ordered block sizes) the law of the increments determines the law of the
//! partition, via a triangular linear system whose coefficients `r(d; b)` count
//! partitions with block composition `b` and gap composition `d`.
//!
//! Everything here is exact: probabilities are big rationals, counts are big
//! integers, and every identity is checked by equality, not tolerance. Brute
//! force over all `Bell(n)` set partitions serves as the oracle at small `n`.
//!
//! Modules:
//! - [`combinatorics`]: compositions, set partitions, increment/gap encodings,
//!   the two order relations.
//! - [`coefficients`]: the coefficients `r(d; b)` three ways (brute force,
//!   constrained-matrix sum, generating-function expansion).
//! - [`laws`]: partition and increment laws, the forward map and its
//!   triangular inversion, exchangeability and independence predicates.
//! - [`models`]: CRP(θ), the two-parameter family, seeded samplers, and the
//!   characterization of independent-increment exchangeable partitions.
//! - [`gaps`]: the gap representation and the partial-sum identity.
//! - [`lawfile`]: the on-disk law interchange format.

#![forbid(unsafe_code)]

pub mod coefficients;
pub mod combinatorics;
pub mod gaps;
pub mod lawfile;
pub mod laws;
pub mod models;

mod error;
mod par;

pub use error::Error;

/// Exact rational probability value.
pub type Rational = num::BigRational;

/// Exact non-negative count.
pub type Count = num::BigUint;

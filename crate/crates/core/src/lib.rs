//! Exact conjugacy certificates.
//!
//! Every square matrix over a field is conjugate to its transpose by a
//! symmetric matrix, and all such conjugators are symmetric exactly when the
//! matrix is cyclic. More generally, in a central simple algebra `A` with an
//! involution `theta` of the first kind, every `a` admits an invertible `g`
//! with `g a g^-1 = theta(a)` and `theta(g) = eps(theta) g`. This crate
//! constructs and verifies such conjugators with exact arithmetic over the
//! rationals, prime fields and quadratic extensions, and over quaternion
//! matrix algebras.

pub mod canonical;
pub mod csa;
pub mod error;
pub mod field;
pub mod json;
pub mod matrix;
pub mod poly;
pub mod sample;
pub mod transpose;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use matrix::Mat;
pub use poly::Poly;

/// Knobs for the randomized parts of the algorithms (maximal-order vector
/// search, equal-degree splitting). Results are deterministic for a fixed
/// config.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Skip pseudorandom sampling and use the exhaustive fallbacks where
    /// they apply.
    pub deterministic: bool,
}

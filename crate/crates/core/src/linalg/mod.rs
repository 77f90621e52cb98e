//! Exact integer and rational linear algebra shared by the fan and Chow
//! ring computations. Nothing here touches floating point.

mod dense;
mod int;
mod sparse;

use thiserror::Error;

pub use dense::ExactMatrix;
pub use int::ExactInt;
pub use sparse::{sparse_invariant_factors, sparse_rank, AdaptiveEchelon, Echelon, Overflow, SparseRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("entry ({row},{col}) is not an integer")]
    NonIntegerEntry { row: usize, col: usize },
}

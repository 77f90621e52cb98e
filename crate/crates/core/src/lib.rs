//! Exact Chow rings of heavy/light Hassett spaces `M̄_{0,w}`.
//!
//! The pipeline runs weights → reduced weight graph → graphic matroid and
//! its 1-connected flats → nested-set Bergman fan → Chow ring presentation,
//! with every computation in exact integer or rational arithmetic.

pub mod chow;
pub mod fan;
pub mod graph_matroid;
pub mod linalg;
pub mod subset;
pub mod verify;
pub mod weights;

use thiserror::Error;

pub use subset::VertexSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Weight(#[from] weights::WeightError),
    #[error(transparent)]
    Matroid(#[from] graph_matroid::MatroidError),
    #[error(transparent)]
    Fan(#[from] fan::FanError),
    #[error(transparent)]
    Chow(#[from] chow::ChowError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

impl Error {
    /// The weight-validation error underneath, if that is what this is.
    pub fn weight_error(&self) -> Option<&weights::WeightError> {
        use chow::ChowError;
        use fan::FanError;
        use graph_matroid::MatroidError;
        match self {
            Error::Weight(e)
            | Error::Matroid(MatroidError::Weight(e))
            | Error::Fan(FanError::Matroid(MatroidError::Weight(e)))
            | Error::Chow(ChowError::Weight(e))
            | Error::Chow(ChowError::Matroid(MatroidError::Weight(e)))
            | Error::Chow(ChowError::Fan(FanError::Matroid(MatroidError::Weight(e)))) => Some(e),
            _ => None,
        }
    }
}

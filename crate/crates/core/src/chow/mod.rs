//! Chow ring presentations and exact graded computations.

mod dual_graph;
mod keel;
mod presentation;
mod pullback;
mod ring;

use thiserror::Error;

use crate::fan::FanError;
use crate::graph_matroid::MatroidError;
use crate::weights::WeightError;

pub use dual_graph::{dual_graph, DualGraph};
pub use keel::{keel_compatible, keel_presentation, representative, KeelPresentation, MAX_KEEL_POINTS};
pub use presentation::{all_pair_relations, heavy_light_presentation, Presentation};
pub use pullback::{keel_iso_check, pullback, pullback_into, IsoReport, PullbackReport};
pub use ring::{ChowClass, ChowRing, GradedBasis, Monomial, Polynomial};

#[derive(Debug, Error)]
pub enum ChowError {
    #[error("degree {degree} is outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("polynomial is not homogeneous")]
    InhomogeneousInput,
    #[error("product has degree {degree}, above the top degree {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("relation not preserved: {0}")]
    RelationNotPreserved(String),
    #[error("unknown generator D^{0}")]
    UnknownGenerator(String),
    #[error("malformed polynomial: {0}")]
    MalformedPolynomial(String),
    #[error("Keel presentation needs 4 <= n <= {max}, got {0}", max = keel::MAX_KEEL_POINTS)]
    BadPointCount(usize),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

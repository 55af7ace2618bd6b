use thiserror::Error;

use crate::picard::{GeneratorId, Space};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },

    #[error("genus {0} is out of range (need g >= 2)")]
    GenusOutOfRange(u32),

    #[error("invalid boundary divisor delta_{genus}:{marks:?} on {space}")]
    InvalidBoundary {
        space: Space,
        genus: u32,
        marks: Vec<u32>,
    },

    #[error("generator {gen} does not belong to {space}")]
    ForeignGenerator { gen: GeneratorId, space: Space },

    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: Space, right: Space },

    #[error("requires {what}, got {space}")]
    Precondition { what: &'static str, space: Space },

    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u32, u32),

    #[error("marking {index} out of range 1..={max}")]
    MarkingOutOfRange { index: u32, max: u32 },

    #[error("curve functional pairs nontrivially with the undetermined coefficient of {0}")]
    UnknownCoefficientTouched(GeneratorId),

    #[error("genus-2 relation not annihilated (pairing {0})")]
    Genus2RelationViolated(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("family parameter k = {0} is below 2")]
    KOutOfRange(i64),

    #[error("perturbation t must be nonzero")]
    TZero,

    #[error("internal check failed: {0}")]
    AssertionFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

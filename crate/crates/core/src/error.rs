use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bound vector: {0}")]
    InvalidBounds(String),

    #[error("invalid diagram:\n{0}")]
    InvalidDiagram(ValidationReport),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("unknown outcome `{outcome}` for node `{node}`")]
    UnknownOutcome { node: String, outcome: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("cannot plan query: {0}")]
    Unplannable(String),

    #[error("vertex combination count {combinations} exceeds cap {cap}")]
    Capacity { combinations: u128, cap: u128 },

    #[error("incomplete vertex assignment: {0}")]
    IncompleteAssignment(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

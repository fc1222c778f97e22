use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative probability {value:e} at row {row}, column {col}")]
    NegativeProbability { row: usize, col: usize, value: f64 },

    #[error("row {row} sums to {sum}, expected 1")]
    NotNormalized { row: usize, sum: f64 },

    #[error("bad mixing weights: {0}")]
    BadWeights(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("class {0} has no vertex enumeration")]
    UnsupportedClass(String),

    /// A solver result failed its own certificate check.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("hierarchy inconsistency: {0}")]
    HierarchyInconsistency(String),
}

use thiserror::Error;

/// Errors raised by the algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree overflow: degree {degree} exceeds dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("cannot mix radicals sqrt({0}) and sqrt({1})")]
    RadicalMismatch(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("square root of a negative number")]
    NegativeRadicand,

    #[error("degenerate bilinear form")]
    Degenerate,

    #[error("null hyperplane: the normal direction has zero length")]
    NullHyperplane,

    #[error("wrong orbit: expected {expected}, found {found}")]
    WrongOrbit { expected: &'static str, found: String },

    #[error("plane is not calibrated")]
    NotCalibrated,

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown standard object {0:?}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

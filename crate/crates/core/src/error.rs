use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {n} outside supported range {min}..={max}")]
    DimensionOutOfRange { n: u32, min: u32, max: u32 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("code must contain at least one word")]
    EmptyCode,

    #[error("word {word:#x} does not fit in {n} bits")]
    WordOutOfRange { word: u64, n: u32 },

    #[error("complement of the full cube is empty")]
    EmptyComplement,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("numerical consistency violated: {0}")]
    NumericalConsistency(String),

    #[error("optimizer did not converge: {0}")]
    NonConvergence(String),

    #[error("search refused: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

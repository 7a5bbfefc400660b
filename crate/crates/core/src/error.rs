use thiserror::Error;

/// Errors raised by the solver pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("uncertainty set is empty")]
    EmptyUncertaintySet,
    #[error("uncertainty set is not compact: {0}")]
    NotCompact(String),
    #[error("0 is not in the relative interior of the uncertainty set: {0}")]
    RelintViolation(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("branch-and-bound node limit of {limit} exceeded; result inconclusive")]
    NodeLimit { limit: usize },
    #[error("oracle enumeration supports n <= {limit}, got n = {n}")]
    OracleLimitExceeded { n: usize, limit: usize },
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported format '{0}'")]
    UnsupportedFormat(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

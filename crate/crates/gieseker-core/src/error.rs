use thiserror::Error;

/// Errors surfaced by the library. Mathematical *violations* (a bundle
/// failing admissibility, a bf-morphism failing its axioms) are not errors;
/// they are returned as data by the respective checks. Errors are reserved
/// for malformed inputs and broken preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("degree out of range: {0}")]
    InvalidDegree(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("length-zero chain has no node-value model: {0}")]
    EmptyChain(String),
    #[error("retry budget exhausted after {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    #[error("input failed validation: {0}")]
    Invalid(String),
    #[error("structural insertion failure: {0}")]
    StructuralInsertion(String),
    #[error("internal invariant fault: {0}")]
    InternalFault(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

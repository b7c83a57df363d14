use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative exponent")]
    NegativeExponent,
    #[error("degree of zero undefined")]
    DegreeOfZero,
    #[error("gcd(0,0) undefined")]
    GcdOfZero,
    #[error("element lies in V")]
    ElementInV,
    #[error("no solution exists")]
    NoSolution,
    #[error("zero element")]
    ZeroElement,
    #[error("constant input")]
    ConstantInput,
    #[error("sequence mismatch: {0}")]
    SequenceMismatch(String),
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

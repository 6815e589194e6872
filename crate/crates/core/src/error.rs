use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("at most {max} variables are supported, got {got}")]
    TooManyVariables { got: usize, max: usize },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error(
        "equations do not form a regular sequence: Hilbert numerator {found:?}, \
         a complete intersection would give {expected:?}"
    )]
    NotRegularSequence { expected: Vec<i64>, found: Vec<i64> },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

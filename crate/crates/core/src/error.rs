use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("enumeration needs {count:.3e} candidates, limit is {limit:.0e}")]
    Infeasible { count: f64, limit: f64 },

    #[error("expectation diverges: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

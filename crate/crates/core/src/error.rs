use thiserror::Error;

#[derive(Debug, Error)]
pub enum QhaError {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resolution guard: {0}")]
    Resolution(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("operator is not self-adjoint (||K - K*|| = {0:e})")]
    NotSelfAdjoint(f64),

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QhaError>;

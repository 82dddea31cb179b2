use thiserror::Error;

/// Errors produced by problem construction, solvers and I/O.
#[derive(Debug, Error)]
pub enum HppError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("cumulant overflow at linear predictor eta = {eta:e}")]
    Overflow { eta: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, HppError>;

impl HppError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        HppError::InvalidArgument(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        HppError::DimensionMismatch(msg.into())
    }
}

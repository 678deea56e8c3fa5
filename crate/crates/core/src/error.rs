use crate::gt::{IrrepLabel, Weight};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid irrep label ({0}, {1}, {2}): entries must be non-increasing")]
    InvalidLabel(i64, i64, i64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("degenerate decomposition of {label} at weight {weight}: singular value {value:e} too close to cutoff {cutoff:e}")]
    DegenerateDecomposition {
        label: String,
        weight: Weight,
        value: f64,
        cutoff: f64,
    },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("no such weight {weight} in {label}")]
    MissingWeight { label: IrrepLabel, weight: Weight },

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache format: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

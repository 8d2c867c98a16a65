use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("input vector is empty")]
    EmptyInput,

    #[error("vectors must have equal sums (got {left} and {right})")]
    UnequalSums { left: f64, right: f64 },

    #[error("vectors must have equal length (got {left} and {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("allocation {candidate:?} is not majorized by {reference:?}")]
    NotMajorized { candidate: Vec<f64>, reference: Vec<f64> },

    #[error("degenerate regime: sigma_g^2/sigma_h^2 = {a} >= 1, secrecy capacity is 0")]
    DegenerateRegime { a: f64 },

    #[error("I/O error on {}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

impl Error {
    /// Process exit code: 1 for runtime failures, 2 for invalid arguments
    /// or violated preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

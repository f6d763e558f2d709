//! Error and result types shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

use crate::series::ValidationReport;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A series is shorter than the operation requires.
    #[error("series of length {len} is too short (need at least {min})")]
    DegenerateSeries { len: usize, min: usize },

    #[error("class labels must be non-empty")]
    EmptyLabel,

    #[error("dataset has {series} series but {labels} labels")]
    CountMismatch { series: usize, labels: usize },

    #[error("dilation rate must be at least 1")]
    ZeroDilation,

    #[error("dilation {d} is out of range for a series of length {n}")]
    InvalidDilation { d: usize, n: usize },

    #[error("window length {w} is invalid for length {n}")]
    InvalidWindow { w: usize, n: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dataset validation failed:\n{0}")]
    InvalidDataset(ValidationReport),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("classifier fit failed: {0}")]
    Fit(String),

    /// Malformed input data file; carries the 1-based offending line.
    #[error("{}:{line}: {msg}", path.display())]
    Format {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unsupported model format version {found} (this build reads version {supported})")]
    Version { found: u32, supported: u32 },

    #[error("model file is not valid JSON: {0}")]
    Parse(String),

    #[error("model file violates the schema: {0}")]
    Schema(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

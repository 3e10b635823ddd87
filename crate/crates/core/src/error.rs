use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("invalid record: {0}")]
    InvalidRecord(String),

    #[error("record {0} has no label")]
    Unlabeled(usize),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("class {0} has no records; balancing is undefined")]
    EmptyClass(u8),

    #[error("only one class present; {0} is undefined")]
    SingleClass(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("feature set is empty")]
    EmptyFeatureSet,

    #[error("model document error at {path}: {message}")]
    Model { path: String, message: String },

    #[error(
        "calibration did not converge after {iterations} iterations (bracket [{low}, {high}])"
    )]
    Calibration {
        iterations: usize,
        low: f64,
        high: f64,
    },

    #[error("intercept is not calibrated for this configuration; run calibration first")]
    Uncalibrated,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn model(path: &str, message: impl Into<String>) -> Self {
        Error::Model {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

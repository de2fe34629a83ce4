use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{0} must be finite")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown method {0:?} (expected `syntact` or `schroeder`)")]
    UnknownMethod(String),

    #[error("{path}:{line}: {message}")]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unequal rater counts: items {items:?} have counts differing from {expected}")]
    UnequalRaterCounts { expected: usize, items: Vec<usize> },

    #[error("kappa undefined: expected agreement is 1 (all ratings fall in one category)")]
    KappaUndefined,

    #[error("intended class {0} has no ratings")]
    EmptyClass(String),

    #[error("ratings reference sample ids missing from the manifest: {0:?}")]
    OrphanSamples(Vec<String>),

    #[error("duplicate rating for sample {sample_id} by rater {rater_id}")]
    DuplicateRating { sample_id: String, rater_id: String },

    #[error("malformed record at line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("tts request for {sample_id} failed permanently: {message}")]
    PermanentTtsFailure { sample_id: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("window must be square, got {width}x{height}")]
    NonSquareWindow { width: usize, height: usize },

    #[error("invalid angle set: {0}")]
    InvalidAngles(String),

    #[error("invalid block grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("descriptor length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("duplicate source id `{0}`")]
    DuplicateId(String),

    #[error("configuration digest mismatch: `{expected}` vs `{actual}`")]
    DigestMismatch { expected: String, actual: String },

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("empty index")]
    EmptyIndex,

    #[error("invalid IRMA code `{code}` at position {position}: {reason}")]
    InvalidIrmaCode {
        code: String,
        position: usize,
        reason: String,
    },

    #[error("missing label for `{0}`")]
    MissingLabel(String),

    #[error("query `{0}` is also present in the index")]
    QueryInIndex(String),

    #[error("malformed descriptor file: {0}")]
    Format(String),

    #[error("invalid manifest: {0}")]
    Manifest(String),

    #[error("failed to decode image {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

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

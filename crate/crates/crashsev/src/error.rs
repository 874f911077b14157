use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid argument: {0}")]
    InvalidArg(String),

    #[error("required column {0:?} missing from CSV header")]
    MissingColumn(String),

    #[error("csv error at line {line}: {msg}")]
    Csv { line: u64, msg: String },

    #[error("store root {0} already exists; pass --overwrite to replace it")]
    StoreExists(PathBuf),

    #[error("store integrity error in partition {partition}, column {column}: {msg}")]
    Integrity {
        partition: String,
        column: String,
        msg: String,
    },

    #[error("degenerate labels: training data contains a single class")]
    DegenerateLabels,

    #[error("ROC undefined: actual labels contain a single class")]
    RocUndefined,

    #[error("PR curve undefined: no positive examples")]
    NoPositives,

    #[error("feature count mismatch: expected {expected}, got {got}")]
    FeatureMismatch { expected: usize, got: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {msg}")]
    Json { path: PathBuf, msg: String },

    #[error("stage {stage} failed: {source}")]
    Stage { stage: String, source: Box<Error> },

    #[error("{0}")]
    Data(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn json(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::Json {
            path: path.into(),
            msg: err.to_string(),
        }
    }

    /// Process exit code class: 1 usage, 2 data, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArg(_) | Error::StoreExists(_) => 1,
            Error::Io { .. } => 3,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}

use std::io;

use thiserror::Error;

/// Errors produced by the clustering toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("input is empty")]
    EmptyInput,

    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow { line: u64, expected: usize, found: usize },

    #[error("line {line}, column {column}: missing value (missing values are not supported)")]
    MissingValue { line: u64, column: usize },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("category {category} of attribute {attr} is not observed in the dataset")]
    UnobservedCategory { attr: usize, category: u32 },

    #[error("cluster has no members")]
    DegenerateCluster,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input or configuration, as opposed
    /// to internal failures.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Json(_))
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        match err.into_kind() {
            csv::ErrorKind::Io(e) => Error::Io(e),
            csv::ErrorKind::Utf8 { err, .. } => Error::Parse {
                line,
                message: format!("invalid UTF-8: {err}"),
            },
            other => Error::Parse {
                line,
                message: format!("{other:?}"),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

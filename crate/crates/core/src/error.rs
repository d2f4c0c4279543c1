use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected at least {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("knowledge source {index} out of range for {count} sources")]
    SourceOutOfRange { index: usize, count: usize },

    #[error("memory window holds no generations")]
    EmptyWindow,

    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("invalid task: {0}")]
    InvalidTask(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("{path}: line {line}, column {column}: {message}")]
    TaskFile {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("run recorded no knowledge-source choices (baseline PSO)")]
    NoSourceChoices,

    #[error("invalid FEV table: {0}")]
    InvalidTable(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

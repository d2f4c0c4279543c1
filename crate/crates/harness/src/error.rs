use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Invalid experiment file or command-line value.
    #[error("{0}")]
    Config(String),

    /// Inputs that cannot be combined, such as results covering different
    /// problem sets.
    #[error("{0}")]
    Mismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Core(#[from] samtpso::Error),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        HarnessError::Csv {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for configuration and input errors, 3 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) | HarnessError::Mismatch(_) => 2,
            HarnessError::Io { .. } => 3,
            HarnessError::Csv { source, .. } => match source.kind() {
                csv::ErrorKind::Io(_) => 3,
                _ => 2,
            },
            HarnessError::Core(samtpso::Error::Io { .. }) => 3,
            HarnessError::Core(_) => 2,
        }
    }
}

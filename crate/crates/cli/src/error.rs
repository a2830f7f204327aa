use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot parse initial state {descriptor:?}: {reason}")]
    Initial { descriptor: String, reason: String },

    #[error("golden table mismatch: {0}")]
    GoldenMismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] photon_walk::Error),
}

impl CliError {
    /// 0 success, 1 usage or parse error, 2 golden mismatch, 3 I/O error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Initial { .. } | CliError::Model(_) => 1,
            CliError::GoldenMismatch(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

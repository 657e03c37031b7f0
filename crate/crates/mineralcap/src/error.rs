//! Error types shared across the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown mineral {0:?}")]
    UnknownMineral(String),

    #[error("unknown chemistry {0:?}")]
    UnknownChemistry(String),

    #[error("unknown powertrain {0:?}")]
    UnknownPowertrain(String),

    #[error("{context}: {message}")]
    Validation { context: String, message: String },

    #[error("{path}:{line}: {message}")]
    Record {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("missing year {year} in {what}")]
    MissingYear { year: i32, what: String },

    #[error("no binding constraint: {0}")]
    NoConstraint(String),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("unknown table id {0:?}")]
    UnknownTable(String),
}

impl Error {
    pub fn validation(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            context: context.into(),
            message: message.into(),
        }
    }
}

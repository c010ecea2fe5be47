use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (shape mismatch, index out of range, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A configuration value is invalid or infeasible.
    #[error("configuration error: {0}")]
    Config(String),

    /// The one-class SVM solver failed to reach the requested tolerance.
    #[error("solver error{}: {message}", symbol.map(|s| format!(" (symbol {s})")).unwrap_or_default())]
    Solver {
        symbol: Option<usize>,
        message: String,
    },

    /// A persisted file had an unexpected layout or version.
    #[error("format error in {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}

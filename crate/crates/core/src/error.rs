use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// A record in an input file could not be interpreted.
    #[error("{message} at line {line}")]
    Parse { line: usize, message: String },

    #[error("label out of range at line {line}")]
    LabelOutOfRange { line: usize },

    #[error("unsupported model version: {0}")]
    ModelVersion(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("empty {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad arguments rather than by the environment.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Invalid(_))
    }
}

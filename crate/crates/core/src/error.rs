use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument does not fit the object it is applied to (e.g. a selection
    /// vector of the wrong length).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no path between node {origin} and node {destination}")]
    NoPath { origin: usize, destination: usize },

    /// Malformed input. `location` names the offending field or line.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// Well-formed input that breaks a structural invariant.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("size limit exceeded: {what} is {actual}, limit is {limit}; {hint}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("empty selection: {0}")]
    EmptySelection(&'static str),

    /// Failure inside one cell of a parameter sweep.
    #[error("sweep cell {cell}: {source}")]
    InCell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// The innermost error, looking through sweep-cell wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::InCell { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.to_string(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

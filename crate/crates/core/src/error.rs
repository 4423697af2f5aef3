use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("speed {0} mph is outside the encodable range (10, 70]")]
    SpeedOutOfRange(f64),

    #[error("channel {0} does not carry a speed (valid speed channels are 1..=6)")]
    InvalidChannel(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("unknown node id {0}")]
    UnknownNode(u64),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("format error in {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("tile {tile_id}: {source}")]
    Tile {
        tile_id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl std::fmt::Display) -> Self {
        Error::Parse { context: context.into(), message: message.to_string() }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format { path: path.into(), message: message.into() }
    }

    /// True for failures caused by reading or decoding files, as opposed to
    /// invalid arguments or violated preconditions.
    pub fn is_io_or_parse(&self) -> bool {
        match self {
            Error::Io { .. } | Error::Parse { .. } | Error::Format { .. } => true,
            Error::Tile { source, .. } => source.is_io_or_parse(),
            _ => false,
        }
    }
}

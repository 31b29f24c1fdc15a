use std::io;

use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps these onto its documented exit codes: `Io`, `Format` and
/// `UnsupportedDepth` are I/O/format failures (3), `Precondition` is a
/// contract violation (4), `WrongKey` is a fingerprint mismatch (5).
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("unsupported sample depth: maxval {0} (only 255 is supported)")]
    UnsupportedDepth(u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("key fingerprint mismatch")]
    WrongKey,
}

impl Error {
    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared across the crate.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// Tensor or vector dimensions do not line up.
    Shape { context: String, expected: String, got: String },
    /// Class id outside the model head or the declared universe.
    ClassRange { class: usize, limit: usize },
    /// Bad or inconsistent configuration; message names the offending key.
    Config(String),
    /// NaN/Inf encountered where finite values are required.
    NumericalFailure(String),
    /// Data accessed or labeled outside the incremental schedule contract.
    ScheduleViolation(String),
    /// Operation requires a trainable model but got a frozen snapshot.
    FrozenModel(&'static str),
    /// Malformed binary/text input file; offset is in bytes where known.
    Format { path: String, offset: u64, message: String },
    /// Checkpoint schema version not supported by this build.
    CheckpointVersion { found: u32, supported: u32 },
    Io(std::io::Error),
}

impl Error {
    pub fn shape(context: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::Shape { context: context.into(), expected: expected.into(), got: got.into() }
    }

    pub fn format(path: impl Into<String>, offset: u64, message: impl Into<String>) -> Self {
        Error::Format { path: path.into(), offset, message: message.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape { context, expected, got } => {
                write!(f, "shape mismatch in {context}: expected {expected}, got {got}")
            }
            Error::ClassRange { class, limit } => {
                write!(f, "class id {class} out of range (limit {limit})")
            }
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::ScheduleViolation(msg) => write!(f, "schedule violation: {msg}"),
            Error::FrozenModel(what) => write!(f, "frozen model: {what}"),
            Error::Format { path, offset, message } => {
                write!(f, "format error in {path} at byte {offset}: {message}")
            }
            Error::CheckpointVersion { found, supported } => {
                write!(f, "checkpoint schema version {found} not supported (this build reads {supported})")
            }
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

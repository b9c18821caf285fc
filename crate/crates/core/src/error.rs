use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value violates a type or operation invariant.
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("input too short: need at least {min} samples for edge padding, got {got}")]
    InputTooShort { min: usize, got: usize },

    #[error("filter design failed: {0}")]
    DesignFailure(String),

    /// The window/hop pair does not sum to one across overlapping frames.
    #[error("window {shape} (length {length}) is not constant-overlap-add at hop {hop}: max deviation {deviation:.3e}")]
    Cola {
        shape: String,
        length: usize,
        hop: usize,
        deviation: f64,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed file content; `location` names the line or field.
    #[error("{}: {location}: {message}", path.display())]
    Parse {
        path: PathBuf,
        location: String,
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code: 1 validation, 2 I/O, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::InputTooShort { .. } | Error::Parse { .. } => 1,
            Error::Io { .. } => 2,
            Error::DesignFailure(_) | Error::Cola { .. } => 3,
        }
    }
}

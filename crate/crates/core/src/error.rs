use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    Wav { path: PathBuf, reason: String },

    #[error("{path}: unsupported audio format ({detail})")]
    UnsupportedFormat { path: PathBuf, detail: String },

    #[error("{path}: no audio samples")]
    EmptyAudio { path: PathBuf },

    #[error("invalid {what}: {reason}")]
    InvalidInput { what: &'static str, reason: String },

    /// The excerpt is not usable as a vibrato note. `reason` is a short
    /// machine-readable tag such as `no-vibrato`.
    #[error("rejected ({reason}): {detail}")]
    Rejected {
        reason: &'static str,
        detail: String,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn rejected(reason: &'static str, detail: impl Into<String>) -> Self {
        Error::Rejected {
            reason,
            detail: detail.into(),
        }
    }

    /// Machine-readable rejection tag, if this error is an analysis rejection.
    pub fn rejection_reason(&self) -> Option<&'static str> {
        match self {
            Error::Rejected { reason, .. } => Some(reason),
            _ => None,
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::Wav { .. }
                | Error::UnsupportedFormat { .. }
                | Error::EmptyAudio { .. }
                | Error::Csv(_)
        )
    }
}

//! Error types for parsing, writing, and command execution.

use thiserror::Error;

/// A format-level failure: positioned parse errors or write refusals.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] cmprobe_core::Error),
    #[error("refusing to write: {reason}")]
    Refused { reason: String },
}

impl FormatError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn refused(reason: impl Into<String>) -> Self {
        FormatError::Refused {
            reason: reason.into(),
        }
    }
}

/// A command-level failure; always exits with status 1.
#[derive(Debug, Error)]
pub enum CliError {
    /// A named input file failed to parse; the Display keeps
    /// `path: line N: message` together for the operator.
    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: FormatError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] cmprobe_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn in_file(path: &std::path::Path, source: FormatError) -> Self {
        CliError::InFile {
            path: path.display().to_string(),
            source,
        }
    }
}

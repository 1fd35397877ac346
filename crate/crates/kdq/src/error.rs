use std::path::Path;

use crate::json::ErrorJson;

/// Everything `kdq` can fail with, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// An input violated a domain invariant or precondition (exit 1).
    #[error(transparent)]
    Domain(#[from] kdq_core::Error),
    /// A file could not be read or written (exit 2).
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    /// A file was not valid JSON of the expected shape (exit 2).
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    /// Flags that do not fit together (exit 2).
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn parse(path: &Path, message: impl ToString) -> Self {
        CliError::Parse {
            path: path.display().to_string(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> ErrorJson {
        let kind = match self {
            CliError::Domain(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Usage(_) => "usage",
        };
        ErrorJson {
            error: kind.to_owned(),
            message: self.to_string(),
        }
    }
}

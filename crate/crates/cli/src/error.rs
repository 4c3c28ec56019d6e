use std::fmt;

use awt::AwtError;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    /// Domain error or failed check: exit 1.
    pub fn domain(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    /// I/O or file-format error: exit 2.
    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<AwtError> for CliError {
    fn from(e: AwtError) -> Self {
        match e {
            AwtError::Io(_) | AwtError::CorruptBank(_) | AwtError::NonFinite { .. } => Self::io(e.to_string()),
            _ => Self::domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

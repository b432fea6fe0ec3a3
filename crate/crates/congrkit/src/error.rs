use std::fmt;

use congrkit_core::Error as CoreError;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Parse = 2,
    Precondition = 3,
    Verification = 4,
    CapExceeded = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// An error carrying the exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Parse,
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Precondition,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Verification,
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

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let exit = match e {
            CoreError::CapExceeded { .. } => Exit::CapExceeded,
            CoreError::Tolerance { .. } | CoreError::InternalInvariant(_) => Exit::Verification,
            _ => Exit::Precondition,
        };
        Self {
            exit,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::precondition(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

use std::fmt;

use zonefit::{AnalysisError, DataError, FitError, GridError, SynthError, ZoneError};

/// Exit code for bad input: unreadable or invalid files, flags or configs.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for failures that are not the caller's fault.
pub const EXIT_INTERNAL: i32 = 1;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError::Internal(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    /// Prefixes the message with context such as a file name.
    pub fn context(self, what: impl fmt::Display) -> Self {
        match self {
            CliError::Input(m) => CliError::Input(format!("{what}: {m}")),
            CliError::Internal(m) => CliError::Internal(format!("{what}: {m}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ZoneError> for CliError {
    fn from(e: ZoneError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::Io(e) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("invalid JSON: {e}"))
    }
}

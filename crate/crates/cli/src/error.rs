use thiserror::Error;

/// Failure of a CLI command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or arguments. Nothing was computed.
    #[error("validation error: {0}")]
    Validation(String),

    /// I/O, resource or parse failure during a run.
    #[error("runtime error: {0}")]
    Runtime(String),

    /// A checked invariant was violated. Output files were still written.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<bgrw_core::Error> for CliError {
    fn from(e: bgrw_core::Error) -> Self {
        match e {
            bgrw_core::Error::InvalidParameter { .. } => CliError::Validation(e.to_string()),
            bgrw_core::Error::Invariant(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn validation(name: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("`{name}`: {reason}"))
}

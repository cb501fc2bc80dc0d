use thiserror::Error;

use tdl_core::arith::ArithError;
use tdl_core::dlalgebra::DlError;
use tdl_core::freealg::FreeAlgError;
use tdl_core::grading::GradingError;

/// Exit code for bad input: parse errors and invalid configurations.
pub const EXIT_INVALID: i32 = 2;
/// Exit code for exhausted budgets.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn parse(offset: usize, message: impl Into<String>) -> Self {
        CliError::Parse { column: offset + 1, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Resource(_) => EXIT_RESOURCE,
            _ => EXIT_INVALID,
        }
    }
}

impl From<FreeAlgError> for CliError {
    fn from(e: FreeAlgError) -> Self {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<DlError> for CliError {
    fn from(e: DlError) -> Self {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<GradingError> for CliError {
    fn from(e: GradingError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ArithError> for CliError {
    fn from(e: ArithError) -> Self {
        CliError::Config(e.to_string())
    }
}

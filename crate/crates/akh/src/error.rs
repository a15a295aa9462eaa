use akh_core::complex::ComplexError;
use akh_core::constructions::ConstructionError;
use akh_core::cube::CubeError;

use crate::adt::AdtError;

/// Failures of a command, each with a fixed exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid input, including bad family parameters.
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Cap(CubeError),
    #[error("internal error: {0}")]
    Internal(String),
    /// Weights that are missing, malformed or not usable in the field.
    #[error("{0}")]
    Weights(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Internal(_) => 4,
            CliError::Weights(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<CubeError> for CliError {
    fn from(e: CubeError) -> Self {
        match e {
            CubeError::CapExceeded { .. } => CliError::Cap(e),
            CubeError::StateLength { .. } => CliError::Parse(e.to_string()),
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Cube(c) => c.into(),
            ComplexError::WeightCount { .. } | ComplexError::Weight { .. } => CliError::Weights(e.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<AdtError> for CliError {
    fn from(e: AdtError) -> Self {
        CliError::Parse(e.to_string())
    }
}

//! CLI error type carrying the process exit code.
//!
//! Exit codes: 1 = configuration or constraint problem, 2 = numeric failure
//! during propagation, 3 = verification failure.

use std::fmt;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<nhtls_core::Error> for CliError {
    fn from(e: nhtls_core::Error) -> Self {
        let code = match e {
            nhtls_core::Error::TraceCollapse { .. }
            | nhtls_core::Error::HermiticityDrift { .. }
            | nhtls_core::Error::Overflow { .. } => EXIT_NUMERIC,
            nhtls_core::Error::ConstraintViolation(_)
            | nhtls_core::Error::DegenerateParameters(_)
            | nhtls_core::Error::FormMismatch(_) => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: format!("io error: {e}"),
        }
    }
}

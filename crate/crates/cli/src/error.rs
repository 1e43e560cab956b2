use std::process::ExitCode;

use serde::Serialize;
use thiserror::Error;

/// Failure classes with fixed exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Validation,
    Numerical,
    Io,
}

impl Class {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Class::Validation => ExitCode::from(2),
            Class::Numerical => ExitCode::from(3),
            Class::Io => ExitCode::from(1),
        }
    }
}

#[derive(Debug, Error, Serialize)]
#[error("{code}: {message}")]
pub struct CliError {
    pub class: Class,
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn validation(code: &str, message: impl Into<String>) -> Self {
        Self {
            class: Class::Validation,
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            class: Class::Io,
            code: "io_failure".into(),
            message: message.into(),
        }
    }

    /// Prints `{"error": {...}}` on stderr.
    pub fn report(&self) {
        let body = serde_json::json!({ "error": self });
        eprintln!("{body}");
    }
}

impl From<pfem::Error> for CliError {
    fn from(e: pfem::Error) -> Self {
        let class = match &e {
            pfem::Error::Io(_) => Class::Io,
            e if e.is_numerical() => Class::Numerical,
            _ => Class::Validation,
        };
        Self {
            class,
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

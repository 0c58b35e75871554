use std::path::PathBuf;

use gcfiber_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Io = 1,
    Parse = 2,
    InvalidTriangle = 3,
    Construction = 4,
    Inconsistent = 5,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// One broken inequality, named by the two positions it relates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: invalid triangle ({} violation(s))\n{}", .diagnostics.len(), render(.diagnostics))]
    Invalid {
        path: PathBuf,
        diagnostics: Vec<Diagnostic>,
    },
    #[error("{path}: construction failed: {source}")]
    Construction {
        path: PathBuf,
        #[source]
        source: CoreError,
    },
    #[error("{0}")]
    Usage(String),
}

fn render(d: &[Diagnostic]) -> String {
    d.iter()
        .map(|x| format!("  {}", x.message))
        .collect::<Vec<_>>()
        .join("\n")
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io { .. } => ExitCode::Io,
            CliError::Parse { .. } | CliError::Usage(_) => ExitCode::Parse,
            CliError::Invalid { .. } => ExitCode::InvalidTriangle,
            CliError::Construction { .. } => ExitCode::Construction,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

use std::path::PathBuf;

use schur_core::Error as CoreError;
use thiserror::Error;

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INPUT: i32 = 65;
pub const EXIT_CAP: i32 = 70;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed {what}: {message}")]
    Parse { what: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn parse(what: impl Into<String>, message: impl ToString) -> Self {
        CliError::Parse { what: what.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::CapExceeded(_) | CoreError::SupportOverflow { .. } | CoreError::BudgetExceeded { .. } => {
                    EXIT_CAP
                }
                CoreError::InvalidArgument(_) | CoreError::MalformedPlan(_) => EXIT_INPUT,
                _ => EXIT_OTHER,
            },
            CliError::Read { .. } | CliError::Parse { .. } => EXIT_INPUT,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Write { .. } | CliError::Csv(_) => EXIT_OTHER,
        }
    }

    /// Short machine-readable name printed alongside the exit code.
    pub fn code(&self) -> &'static str {
        match self.exit_code() {
            EXIT_USAGE => "usage",
            EXIT_INPUT => "invalid-input",
            EXIT_CAP => "cap-exceeded",
            _ => match self {
                CliError::Core(CoreError::Leakage { .. }) => "leakage",
                CliError::Core(CoreError::NotUnitary(_)) => "not-unitary",
                CliError::Core(CoreError::Unsupported(_)) => "unsupported",
                _ => "error",
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

//! Front-end pieces for the `nisim` binary: optimizer configuration files,
//! curve datasets, the identity-verification suite and report rendering.

pub mod config;
pub mod curve;
pub mod render;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFY_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const BUDGET: u8 = 3;
}

/// Version tag written into every CSV and JSON output.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] nisim::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config {path}, line {line}: {msg}")]
    Config {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Exit status for this error: budget refusals and usage problems are
    /// distinguished so scripts can react to them.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(nisim::Error::BudgetExceeded(_)) => exit::BUDGET,
            CliError::Core(nisim::Error::NonConvergence(_) | nisim::Error::NumericalConsistency(_)) => {
                exit::VERIFY_FAILED
            }
            _ => exit::USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

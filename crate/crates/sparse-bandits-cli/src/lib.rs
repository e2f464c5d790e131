//! Library backing the `sparse-bandits` binary: run specifications, the
//! subcommand implementations, and the CSV writers.

pub mod commands;
pub mod config;
pub mod output;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Bound(#[from] sparse_bandits::LowerBoundError),
    #[error(transparent)]
    Harness(#[from] sparse_bandits::harness::HarnessError),
}

impl CliError {
    /// Exit code: 2 for usage/config mistakes, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Validation(_) => 2,
            _ => 1,
        }
    }
}

pub use commands::{cmd_lower_bound, cmd_simulate, presets_table};
pub use config::{
    find_preset, EpsilonGrid, ForceLogChoice, PolicySelection, Preset, RunSpec, PRESETS,
};

//! Scenario-driven experiment runner for the FDA-MIMO integrated
//! sensing-and-communication library: loads a JSON scenario, sweeps SNR with
//! parallel Monte-Carlo trials and writes deterministic CSV reports plus a
//! hashed run manifest.

pub mod experiments;
pub mod report;
pub mod scenario;

use thiserror::Error;

/// CLI-level failure classes, mapped onto process exit codes: configuration
/// and schema problems exit with 2, runtime failures with 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    /// Core errors raised while building configurations are the caller's
    /// fault: classify them as configuration errors.
    pub fn from_core_config(err: fda_isac_core::Error) -> Self {
        CliError::Config(err.to_string())
    }

    /// Core errors raised mid-experiment (singular matrices, shape drift)
    /// are runtime failures.
    pub fn from_core_runtime(err: fda_isac_core::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

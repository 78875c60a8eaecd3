//! Command-line front end for `poncelet-core`: config handling, JSON/CSV
//! reports, SVG plots and the conjecture probes.

pub mod commands;
pub mod config;
pub mod probe;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use poncelet_core::families::FamilyError;
use poncelet_core::invariants::InvariantError;
use poncelet_core::loci::LociError;
use poncelet_core::poncelet::PonceletError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Family(#[from] FamilyError),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Poncelet(PonceletError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl CliError {
    /// 1 for failed verification (including the porism gate), 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) | CliError::Poncelet(_) => 1,
            _ => 2,
        }
    }
}

impl From<PonceletError> for CliError {
    fn from(e: PonceletError) -> Self {
        match e {
            PonceletError::NotAPorism { .. } => CliError::Poncelet(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Poncelet(p) => p.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<LociError> for CliError {
    fn from(e: LociError) -> Self {
        match e {
            LociError::Invariant(i) => i.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

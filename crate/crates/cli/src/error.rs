use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(photon_bec::Error),

    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Solver(photon_bec::Error),

    #[error("{failed} of {total} points failed (more than 10%); see the manifest")]
    Partial { failed: usize, total: usize },
}

impl CliError {
    pub fn config(key: &str, reason: impl Into<String>) -> Self {
        CliError::Config(photon_bec::Error::Config {
            key: key.to_string(),
            reason: reason.into(),
        })
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 1,
            CliError::Solver(_) => 2,
            CliError::Partial { .. } => 3,
        }
    }
}

impl From<photon_bec::Error> for CliError {
    fn from(e: photon_bec::Error) -> Self {
        match e {
            photon_bec::Error::Config { .. } => CliError::Config(e),
            other => CliError::Solver(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

//! Scenario-file front end for the holosim simulator.

pub mod config;
pub mod expr;
pub mod run;
pub mod study;

use std::path::PathBuf;

pub use config::{load_config, parse_config, ConfigError, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scenario `{scenario}`: {source}")]
    Simulation {
        scenario: String,
        source: holosim_core::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn simulation(scenario: &str, source: holosim_core::Error) -> Self {
        CliError::Simulation {
            scenario: scenario.into(),
            source,
        }
    }

    /// 2 for numerical invariant aborts, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Simulation {
                source: holosim_core::Error::InvariantBreach { .. } | holosim_core::Error::NonFinite,
                ..
            } => 2,
            _ => 1,
        }
    }
}

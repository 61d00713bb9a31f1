//! Batch front-end for the scattering pipeline.
//!
//! Each command reads a [`RunConfig`], runs the relevant stages and writes
//! plain CSV/JSON files into an output directory together with a copy of
//! the resolved configuration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;

use std::path::PathBuf;

pub use commands::{cmd_direct, cmd_inverse, cmd_roundtrip, cmd_validate, RoundtripReport, ValidateReport};
pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: akns_spps::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("validation failed: max residual {max:.3e} exceeds {tol:.1e}")]
    Validation { max: f64, tol: f64 },
}

impl CliError {
    pub fn stage(stage: &'static str) -> impl FnOnce(akns_spps::Error) -> CliError {
        move |source| CliError::Stage { stage, source }
    }

    pub fn exit_code(&self) -> u8 {
        use akns_spps::Error as E;
        match self {
            CliError::Stage { source, .. } => match source {
                E::Decay { .. } => 2,
                E::NonvanishingAssumptionViolated { .. } => 3,
                E::RankDeficiency { .. } => 4,
                E::DegenerateDenominator { .. } => 5,
                _ => 1,
            },
            CliError::Validation { .. } => 6,
            CliError::Config(_) | CliError::Io { .. } => 1,
        }
    }
}

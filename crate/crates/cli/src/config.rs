//! Run configuration, read from TOML.

use std::path::{Path, PathBuf};

use akns_spps::direct::RhoSampling;
use akns_spps::inverse::{InverseConfig, DEFAULT_X_NODES_PER_UNIT};
use akns_spps::numerics::GridSpec;
use akns_spps::potential::PotentialSpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_VALIDATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    pub grid: GridSpec,
    pub direct: DirectSection,
    pub inverse: Option<InverseSection>,
    #[serde(default)]
    pub validate: ValidateSection,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectSection {
    #[serde(rename = "N")]
    pub order: usize,
    pub rho_sampling: RhoSampling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseSection {
    #[serde(rename = "N")]
    pub order: usize,
    pub l: f64,
    #[serde(default = "default_x_nodes")]
    pub x_nodes_per_unit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSection {
    pub tolerance: f64,
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_VALIDATE_TOL,
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_x_nodes() -> usize {
    DEFAULT_X_NODES_PER_UNIT
}

impl InverseSection {
    pub fn to_config(&self) -> InverseConfig {
        InverseConfig {
            x_nodes_per_unit: self.x_nodes_per_unit,
            ..InverseConfig::new(self.order, self.l)
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Reads `path`; a relative sampled-potential path is taken relative
    /// to the config file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        if let PotentialSpec::Sampled { path: p } = &mut cfg.potential {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn inverse_section(&self) -> Result<&InverseSection, CliError> {
        self.inverse
            .as_ref()
            .ok_or_else(|| CliError::Config("the [inverse] section is required for this command".into()))
    }

    fn check(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        if self.direct.order == 0 {
            return bad("direct.N must be positive");
        }
        match self.direct.rho_sampling {
            RhoSampling::Uniform { count, .. } if count < 2 => return bad("uniform sampling needs count >= 2"),
            RhoSampling::LogSymmetric { count, .. } if count % 2 != 0 => {
                return bad("log_symmetric sampling needs an even count (half per sign)")
            }
            _ => {}
        }
        if let Some(inv) = &self.inverse {
            if inv.order == 0 || !(inv.l > 0.0) || inv.x_nodes_per_unit == 0 {
                return bad("inverse.N, inverse.l and inverse.x_nodes_per_unit must be positive");
            }
        }
        if !(self.validate.tolerance > 0.0) {
            return bad("validate.tolerance must be positive");
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

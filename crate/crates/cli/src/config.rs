//! TOML run configuration.

use std::path::{Path, PathBuf};

use alchemq::alchemy::{ChargeField, Scaffold, DEFAULT_OVERLAP_THRESHOLD};
use alchemq::integrals::{CorePotential, TensorArchive};
use alchemq::oracle::DEFAULT_SELECTION_THRESHOLD;
use alchemq::qubits::{Entangler, Rotation};
use alchemq::vqe::{NumberPenalty, OptimizerConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Schema tag of configuration snapshots.
pub const CONFIG_SCHEMA: &str = "alchemq.config.v1";

/// Finite-difference step on θ used with shot sampling unless set explicitly.
pub const SHOT_THETA_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CoreKind {
    None,
    #[default]
    FrozenCore,
    Ingested,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyConfig {
    pub target: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub scaffold: PathBuf,
    /// Point-charge file; vacuum when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charges: Option<PathBuf>,
    /// Species allowed at every site, replacing the scaffold's lists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub species: Option<Vec<String>>,
    #[serde(default = "default_active")]
    pub active_orbitals: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub rotation: Rotation,
    #[serde(default)]
    pub entangler: Entangler,
    #[serde(default)]
    pub core_potential: CoreKind,
    /// Archive with `V_ecp/<site>/<species>` blocks for `core_potential = "ingested"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_archive: Option<PathBuf>,
    #[serde(default = "default_threshold")]
    pub overlap_threshold: f64,
    #[serde(default = "default_selection")]
    pub selection_threshold: f64,
    /// Integral cache; `<out>/integrals.alch` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrals: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltyConfig>,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
}

fn default_active() -> usize {
    3
}

fn default_depth() -> usize {
    6
}

fn default_threshold() -> f64 {
    DEFAULT_OVERLAP_THRESHOLD
}

fn default_selection() -> f64 {
    DEFAULT_SELECTION_THRESHOLD
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<u64>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl RunConfig {
    /// Parse TOML text; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path, origin: &Path, overrides: Overrides) -> Result<Self> {
        let err = |message: String| CliError::Config {
            path: origin.to_path_buf(),
            message,
        };
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| err(e.to_string()))?;
        let explicit_step = table
            .get("optimizer")
            .and_then(|o| o.as_table())
            .is_some_and(|o| o.contains_key("theta_step"));
        let mut config: RunConfig = table.try_into().map_err(|e: toml::de::Error| err(e.to_string()))?;
        if let Some(schema) = &config.schema {
            if schema != CONFIG_SCHEMA {
                return Err(err(format!("unsupported schema `{schema}`")));
            }
        }
        config.schema = Some(CONFIG_SCHEMA.into());
        config.scaffold = resolve(base, &config.scaffold);
        config.charges = config.charges.map(|p| resolve(base, &p));
        config.core_archive = config.core_archive.map(|p| resolve(base, &p));
        config.integrals = config.integrals.map(|p| resolve(base, &p));
        if let Some(seed) = overrides.seed {
            config.optimizer.seed = seed;
        }
        if let Some(shots) = overrides.shots {
            config.optimizer.shots = shots;
        }
        if config.optimizer.shots > 0 && !explicit_step {
            config.optimizer.theta_step = SHOT_THETA_STEP;
        }
        config.optimizer.validate().map_err(|e| err(e.to_string()))?;
        if config.active_orbitals == 0 {
            return Err(err("active_orbitals must be at least 1".into()));
        }
        if config.core_potential == CoreKind::Ingested && config.core_archive.is_none() {
            return Err(err("core_potential = \"ingested\" needs core_archive".into()));
        }
        Ok(config)
    }

    pub fn load(path: &Path, overrides: Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, path, overrides)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn scaffold(&self) -> Result<Scaffold> {
        let scaffold = Scaffold::read(&self.scaffold)?;
        match &self.species {
            None => Ok(scaffold),
            Some(species) => Ok(Scaffold::new(
                scaffold
                    .sites()
                    .iter()
                    .map(|s| (s.position, species.clone()))
                    .collect(),
            )?),
        }
    }

    pub fn field(&self) -> Result<ChargeField> {
        match &self.charges {
            Some(p) => Ok(ChargeField::read(p)?),
            None => Ok(ChargeField::vacuum()),
        }
    }

    pub fn core(&self) -> Result<CorePotential> {
        Ok(match self.core_potential {
            CoreKind::None => CorePotential::None,
            CoreKind::FrozenCore => CorePotential::FrozenCore,
            CoreKind::Ingested => {
                let path = self.core_archive.as_ref().expect("checked on load");
                CorePotential::Ingested(TensorArchive::load(path)?)
            }
        })
    }

    pub fn penalty(&self) -> Option<NumberPenalty> {
        self.penalty.map(|p| NumberPenalty {
            target: p.target,
            weight: p.weight,
        })
    }

    pub fn integrals_path(&self, out: &Path) -> PathBuf {
        self.integrals.clone().unwrap_or_else(|| out.join("integrals.alch"))
    }
}

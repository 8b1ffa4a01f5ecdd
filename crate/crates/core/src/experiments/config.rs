use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bandit::{InitSpec, LandscapeSpec};
use crate::error::{LabError, Result};

pub const DEFAULT_EXACT_STEPS: u64 = 5_000;
pub const DEFAULT_STOCHASTIC_STEPS: u64 = 20_000;
pub const DEFAULT_SOLVED_MASS: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateMode {
    Exact,
    Stochastic,
}

impl UpdateMode {
    pub fn name(self) -> &'static str {
        match self {
            UpdateMode::Exact => "exact",
            UpdateMode::Stochastic => "stochastic",
        }
    }
}

impl std::str::FromStr for UpdateMode {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(UpdateMode::Exact),
            "stochastic" => Ok(UpdateMode::Stochastic),
            other => Err(LabError::Config(format!(
                "unknown mode {other:?} (expected exact or stochastic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UpdateSpec {
    pub alpha: f64,
    pub n_samples: usize,
    pub mode: UpdateMode,
}

impl Default for UpdateSpec {
    fn default() -> Self {
        UpdateSpec {
            alpha: 0.1,
            n_samples: 16,
            mode: UpdateMode::Stochastic,
        }
    }
}

/// Everything that determines a sweep. Loaded from TOML; every field has a
/// default, so an empty file is a valid config.
///
/// ```toml
/// beta_grid = [0.0, 1.0, 2.0, 4.0, 8.0]
/// seeds = [0, 1, 2]
/// steps = 20000        # omit for the per-mode default
/// record_every = 100
///
/// [update]
/// alpha = 0.1
/// n_samples = 16
/// mode = "stochastic"
///
/// [landscape]
/// arms = 100
///
/// [init]
/// peak_arm = 25
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub beta_grid: Vec<f64>,
    pub seeds: Vec<u64>,
    /// `None` selects 5000 (exact) or 20000 (stochastic).
    pub steps: Option<u64>,
    pub record_every: u64,
    /// Optimal mass at which a run counts as solved.
    pub solved_mass: f64,
    pub output_dir: PathBuf,
    pub snapshot_policies: bool,
    pub update: UpdateSpec,
    pub landscape: LandscapeSpec,
    pub init: InitSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            beta_grid: vec![0.0, 1.0, 2.0, 4.0, 8.0],
            seeds: (0..10).collect(),
            steps: None,
            record_every: 100,
            solved_mass: DEFAULT_SOLVED_MASS,
            output_dir: PathBuf::from("risklab-out"),
            snapshot_policies: false,
            update: UpdateSpec::default(),
            landscape: LandscapeSpec::default(),
            init: InitSpec::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| LabError::Config(e.message().to_owned()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            LabError::Config(m) => LabError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn steps(&self) -> u64 {
        self.steps.unwrap_or(match self.update.mode {
            UpdateMode::Exact => DEFAULT_EXACT_STEPS,
            UpdateMode::Stochastic => DEFAULT_STOCHASTIC_STEPS,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps() == 0 {
            return Err(LabError::Config("steps must be at least 1".into()));
        }
        if self.record_every == 0 {
            return Err(LabError::Config("record_every must be at least 1".into()));
        }
        if self.beta_grid.is_empty() {
            return Err(LabError::Config("beta_grid is empty".into()));
        }
        if let Some(b) = self.beta_grid.iter().find(|b| !b.is_finite()) {
            return Err(LabError::Config(format!("beta {b} is not finite")));
        }
        if self.seeds.is_empty() {
            return Err(LabError::Config("seeds is empty".into()));
        }
        if !(self.update.alpha.is_finite() && self.update.alpha > 0.0) {
            return Err(LabError::Config(format!(
                "alpha {} must be positive",
                self.update.alpha
            )));
        }
        if self.update.mode == UpdateMode::Stochastic && self.update.n_samples < 2 {
            return Err(LabError::Config(
                "stochastic mode needs n_samples >= 2".into(),
            ));
        }
        if !(self.solved_mass > 0.0 && self.solved_mass <= 1.0) {
            return Err(LabError::Config(format!(
                "solved_mass {} not in (0, 1]",
                self.solved_mass
            )));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical TOML, with the
    /// output directory blanked and the step count resolved.
    pub fn digest(&self) -> String {
        let mut canon = self.clone();
        canon.output_dir = PathBuf::new();
        canon.steps = Some(self.steps());
        let h = Sha256::digest(canon.to_toml().as_bytes());
        h.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

//! Simulation configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::energy::MassNorm;
use crate::nullcond::{load_tensors, CoefficientTensors};
use crate::solver::{InitialData, Preset, RunSettings, SystemSpec};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("invalid value: {0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] crate::solver::SolverError),
    #[error("tensor file {path}")]
    Tensors {
        path: PathBuf,
        #[source]
        source: crate::nullcond::NullError,
    },
}

pub type Result<T> = std::result::Result<T, ConfigError>;

pub const KEYS: [&str; 10] = [
    "B",
    "epsilon",
    "dr",
    "cfl",
    "t_final",
    "preset",
    "tensors_file",
    "T_ladder",
    "seed",
    "mass_norm",
];

/// Contents of a simulation config file; every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(rename = "B", default = "defaults::b")]
    pub b: f64,
    #[serde(default = "defaults::epsilon")]
    pub epsilon: f64,
    #[serde(default = "defaults::dr")]
    pub dr: f64,
    #[serde(default = "defaults::cfl")]
    pub cfl: f64,
    #[serde(default = "defaults::t_final")]
    pub t_final: f64,
    #[serde(default = "defaults::preset")]
    pub preset: String,
    /// Overrides the preset's coefficients; masses are 0 for wave and 1 for Klein-Gordon components.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensors_file: Option<PathBuf>,
    #[serde(rename = "T_ladder", default = "defaults::ladder")]
    pub t_ladder: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    /// `doubled`, `intro` or `flux`.
    #[serde(default)]
    pub mass_norm: MassNorm,
}

mod defaults {
    pub fn b() -> f64 {
        2.0
    }
    pub fn epsilon() -> f64 {
        0.01
    }
    pub fn dr() -> f64 {
        0.01
    }
    pub fn cfl() -> f64 {
        0.5
    }
    pub fn t_final() -> f64 {
        40.0
    }
    pub fn preset() -> String {
        "free_kg".into()
    }
    pub fn ladder() -> Vec<f64> {
        (5..=20).map(f64::from).collect()
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        toml::from_str("").expect("defaults deserialize")
    }
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_toml(&text)?;
        // relative tensor paths are taken from the config's directory
        if let (Some(tf), Some(dir)) = (&cfg.tensors_file, path.parent()) {
            if tf.is_relative() {
                cfg.tensors_file = Some(dir.join(tf));
            }
        }
        Ok(cfg)
    }

    /// Applies one `key=value` override; the value is read as a TOML value, falling back to a string.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            ConfigError::Parse(format!("override `{assignment}` is not key=value"))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::Parse(format!("unknown key `{key}`")));
        }
        let value = value.trim();
        let parsed: toml::Value = toml::from_str::<toml::Table>(&format!("v = {value}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        let mut table =
            toml::Table::try_from(&*self).map_err(|e| ConfigError::Parse(e.to_string()))?;
        table.insert(key.to_string(), parsed);
        *self = table
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.message().to_string()))?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("B", self.b)?;
        positive("dr", self.dr)?;
        positive("cfl", self.cfl)?;
        if self.cfl > crate::solver::MAX_CFL {
            return Err(ConfigError::Invalid(format!(
                "cfl {} exceeds {}",
                self.cfl,
                crate::solver::MAX_CFL
            )));
        }
        if !(self.epsilon >= 0.0) {
            return Err(ConfigError::Invalid(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        if !(self.t_final > self.b + 1.0) {
            return Err(ConfigError::Invalid(format!(
                "t_final must exceed B + 1 = {}",
                self.b + 1.0
            )));
        }
        if let Some(t) = self.t_ladder.iter().find(|&&t| !(t >= self.b + 1.0)) {
            return Err(ConfigError::Invalid(format!(
                "T_ladder value {t} lies below B + 1"
            )));
        }
        self.preset()?;
        Ok(())
    }

    pub fn preset(&self) -> Result<Preset> {
        Ok(self.preset.parse()?)
    }

    /// The system to evolve: the preset, or the tensor file when one is given.
    pub fn system(&self) -> Result<SystemSpec> {
        match &self.tensors_file {
            None => Ok(self.preset()?.system()?),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                    path: path.clone(),
                    source,
                })?;
                let tensors = load_tensors(&text).map_err(|source| ConfigError::Tensors {
                    path: path.clone(),
                    source,
                })?;
                let masses = default_masses(&tensors);
                let quasi = tensors.is_quasilinear();
                Ok(SystemSpec::new(tensors, masses, quasi)?)
            }
        }
    }

    pub fn data(&self, n: usize) -> InitialData {
        InitialData::Bump {
            b: self.b,
            amps: vec![(self.epsilon, 0.0); n],
        }
    }

    pub fn settings(&self) -> RunSettings {
        RunSettings {
            b: self.b,
            dr: self.dr,
            cfl: self.cfl,
            t_final: self.t_final,
            ladder: self.t_ladder.clone(),
            seed: self.seed,
            ..RunSettings::default()
        }
    }

    /// Hex SHA-256 of the canonical TOML rendering.
    pub fn hash(&self) -> String {
        let text = toml::to_string(self).unwrap_or_default();
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn default_masses(t: &CoefficientTensors) -> Vec<f64> {
    (1..=t.n())
        .map(|c| if t.is_wave(c) { 0.0 } else { 1.0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let mut c = SimConfig::default();
        assert_eq!(c.b, 2.0);
        assert_eq!(c.seed, 0);
        c.set("dr=0.02").unwrap();
        c.set("preset=free_wave").unwrap();
        c.set("T_ladder=[3, 4.5]").unwrap();
        assert_eq!(c.dr, 0.02);
        assert_eq!(c.preset, "free_wave");
        assert_eq!(c.t_ladder, vec![3.0, 4.5]);
        c.validate().unwrap();
        c.set("mass_norm=intro").unwrap();
        assert_eq!(c.mass_norm, MassNorm::Intro);
        assert!(c.set("mass_norm=other").is_err());
        assert!(c.set("bogus=1").is_err());
        assert!(c.set("dr").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(SimConfig::from_toml("B = 2.0\nfoo = 1\n").is_err());
        let c = SimConfig::from_toml("B = 3.0\nepsilon = 0.1\nT_ladder = [4.0, 5.0]\n").unwrap();
        assert_eq!(c.b, 3.0);
        c.validate().unwrap();
    }

    #[test]
    fn validation() {
        let bad = [
            SimConfig {
                cfl: 0.7,
                ..Default::default()
            },
            SimConfig {
                preset: "nope".into(),
                ..Default::default()
            },
            SimConfig {
                t_ladder: vec![2.0],
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = SimConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
    }
}

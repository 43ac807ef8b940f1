use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::family::Family;
use crate::identities::DEFAULT_NUS;

/// Largest `|p|` a grid may request.
pub const MAX_ABS_P: i32 = 64;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("kappa values must be nonzero")]
    KappaZero,
    #[error("mu fraction {0} must lie in (0, 1)")]
    Fraction(f64),
    #[error("p range bound {0} exceeds |p| <= {MAX_ABS_P}")]
    PRange(i32),
    #[error("beta must be positive and finite, got {0}")]
    Beta(f64),
    #[error("unknown check family {0:?} in tolerances")]
    UnknownFamily(String),
    #[error("tolerance for {0} must be finite and nonnegative")]
    Tolerance(String),
    #[error("identity nu values must be positive, got {0}")]
    IdentityNu(f64),
    #[error("draw count must be at least 1")]
    NoDraws,
    #[error("cannot read grid file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed grid file: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    High,
}

impl Precision {
    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::High => "high",
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "double" => Ok(Precision::Double),
            "high" => Ok(Precision::High),
            other => Err(format!("unknown precision {other:?} (expected double or high)")),
        }
    }
}

/// Inclusive range of powers; `min > max` is an empty range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PRange {
    pub min: i32,
    pub max: i32,
}

impl PRange {
    pub fn is_empty(&self) -> bool {
        self.min > self.max
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.min..=self.max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityGrid {
    pub n_max: u32,
    pub p_max: u32,
    pub nu: Vec<f64>,
}

impl Default for IdentityGrid {
    fn default() -> Self {
        Self {
            n_max: 8,
            p_max: 8,
            nu: DEFAULT_NUS.to_vec(),
        }
    }
}

/// Perturbs one entry of every `S_p` (or of one) before it reaches the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fault {
    /// Only this power, or all when `None`.
    pub p: Option<i32>,
    /// Entry index in `a, b, c, d` order.
    pub entry: usize,
    /// Added as `delta * max|S_p|`.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub kappa_values: Vec<i32>,
    pub n_values: Vec<u32>,
    /// `mu = fraction * |kappa|`.
    pub mu_fractions: Vec<f64>,
    pub p_range: PRange,
    pub beta: f64,
    pub precision: Precision,
    /// Overrides keyed by family name.
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    pub draws: u32,
    pub identities: IdentityGrid,
    #[serde(skip)]
    pub fault: Option<Fault>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            kappa_values: vec![-3, -2, -1, 1, 2, 3],
            n_values: (0..=4).collect(),
            mu_fractions: vec![0.2, 0.5, 0.9],
            p_range: PRange { min: -4, max: 10 },
            beta: 1.0,
            precision: Precision::Double,
            tolerances: BTreeMap::new(),
            seed: 42,
            draws: 100,
            identities: IdentityGrid::default(),
            fault: None,
        }
    }
}

impl GridConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.kappa_values.is_empty() {
            return Err(ConfigError::Empty("kappa_values"));
        }
        if self.n_values.is_empty() {
            return Err(ConfigError::Empty("n_values"));
        }
        if self.mu_fractions.is_empty() {
            return Err(ConfigError::Empty("mu_fractions"));
        }
        if self.kappa_values.contains(&0) {
            return Err(ConfigError::KappaZero);
        }
        if let Some(&f) = self.mu_fractions.iter().find(|f| !(**f > 0.0 && **f < 1.0)) {
            return Err(ConfigError::Fraction(f));
        }
        for bound in [self.p_range.min, self.p_range.max] {
            if bound.abs() > MAX_ABS_P {
                return Err(ConfigError::PRange(bound));
            }
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(ConfigError::Beta(self.beta));
        }
        for (name, &tol) in &self.tolerances {
            if Family::from_name(name).is_none() {
                return Err(ConfigError::UnknownFamily(name.clone()));
            }
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(ConfigError::Tolerance(name.clone()));
            }
        }
        if let Some(&nu) = self.identities.nu.iter().find(|nu| !(**nu > 0.0 && nu.is_finite())) {
            return Err(ConfigError::IdentityNu(nu));
        }
        if self.draws == 0 {
            return Err(ConfigError::NoDraws);
        }
        Ok(())
    }

    /// Tolerance of a family: the override if present, else the default.
    /// `None` marks an informational family.
    pub fn tolerance(&self, family: Family) -> Option<f64> {
        let default = family.default_tolerance(self.precision)?;
        Some(self.tolerances.get(family.name()).copied().unwrap_or(default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_round_trips() {
        let cfg = GridConfig::default();
        cfg.validate().unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(GridConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_file_takes_defaults() {
        let cfg = GridConfig::from_json(r#"{"kappa_values": [-1], "p_range": {"min": 0, "max": 2}}"#).unwrap();
        assert_eq!(cfg.kappa_values, vec![-1]);
        assert_eq!(cfg.n_values, (0..=4).collect::<Vec<_>>());
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"kappa_values": []}"#,
            r#"{"kappa_values": [0]}"#,
            r#"{"mu_fractions": [1.0]}"#,
            r#"{"p_range": {"min": -65, "max": 0}}"#,
            r#"{"beta": 0}"#,
            r#"{"tolerances": {"no_such_check": 1e-3}}"#,
            r#"{"tolerances": {"det_s": -1}}"#,
            r#"{"draws": 0}"#,
            r#"{"identities": {"nu": [-1.0]}}"#,
            r#"{"unknown_field": 1}"#,
            r#"{"precision": "quad"}"#,
            "not json",
        ] {
            assert!(GridConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn tolerance_override() {
        let mut cfg = GridConfig::default();
        assert_eq!(cfg.tolerance(Family::DetS), Some(1e-12));
        cfg.tolerances.insert("det_s".into(), 1e-3);
        assert_eq!(cfg.tolerance(Family::DetS), Some(1e-3));
        assert_eq!(cfg.tolerance(Family::RoundTripNative), None);
    }
}

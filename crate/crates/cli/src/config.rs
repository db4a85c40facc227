//! Run configuration: one TOML file, overridable from the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("invalid setting {key}: {reason}")]
    Invalid { key: &'static str, reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Relation degree cap; `None` uses the progression's default.
    pub cap: Option<usize>,
    /// Modulus schedule for `count`, `gowers` and `popdiff`.
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub seed: u64,
    /// Slack in the popular-difference threshold.
    pub epsilon: f64,
    /// Density of seeded random subsets.
    pub alpha: f64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Largest dilation tried by the eligibility check.
    pub r_max: usize,
    /// Loop budget for linear-model counts.
    pub budget: u64,
    /// Gowers norm orders for the `gowers` table.
    pub orders: Vec<usize>,
    /// Random signals per modulus in `gowers`.
    pub trials: usize,
    /// Directory of Weyl scenario files used by `verify`; built-ins when unset.
    pub scenarios: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            cap: None,
            n: vec![101, 809],
            seed: 20_240_101,
            epsilon: 0.02,
            alpha: 0.5,
            threads: None,
            out: None,
            format: Format::Json,
            r_max: polyprog::progression::DEFAULT_R_MAX,
            budget: polyprog::cyclic::DEFAULT_BUDGET as u64,
            orders: vec![1, 2, 3],
            trials: 20,
            scenarios: None,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|source| ConfigError::Toml { path: path.into(), source })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key, reason: &str| Err(ConfigError::Invalid { key, reason: reason.into() });
        if self.cap == Some(0) {
            return bad("cap", "must be at least 1");
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return bad("N", "needs at least one positive modulus");
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad("alpha", "must lie in (0, 1]");
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return bad("epsilon", "must be a nonnegative number");
        }
        if self.threads == Some(0) {
            return bad("threads", "must be at least 1");
        }
        if self.r_max == 0 {
            return bad("r_max", "must be at least 1");
        }
        if self.orders.is_empty() || self.orders.contains(&0) {
            return bad("orders", "needs positive Gowers orders");
        }
        Ok(())
    }

    /// Default cap of `prog` unless one is configured.
    pub fn cap_for(&self, prog: &polyprog::progression::Progression) -> usize {
        self.cap.unwrap_or_else(|| prog.default_cap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let c = Config::default();
        c.validate().unwrap();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(toml::from_str::<Config>(&text).unwrap(), c);
    }

    #[test]
    fn rejects_bad_values() {
        let parse = |s: &str| toml::from_str::<Config>(s).unwrap();
        assert!(parse("alpha = 1.5").validate().is_err());
        assert!(parse("N = []").validate().is_err());
        assert!(parse("cap = 0").validate().is_err());
        assert!(parse("threads = 0").validate().is_err());
        assert!(toml::from_str::<Config>("bogus = 1").is_err());
        let c = parse("N = [401]\nformat = \"csv\"\nseed = 7");
        assert_eq!((c.n.clone(), c.format, c.seed), (vec![401], Format::Csv, 7));
    }
}

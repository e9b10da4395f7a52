use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable holding the default working precision in bits.
pub const PREC_ENV: &str = "K3MIRROR_PREC_BITS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    // toml errors carry line and column
    #[error("invalid config {path}: {source}")]
    Parse { path: String, source: toml::de::Error },
    #[error("{PREC_ENV}={value} is not a bit count")]
    Env { value: String },
    #[error("invalid setting: {0}")]
    Invalid(String),
}

/// Run parameters. Layered as defaults, then the config file, then
/// `K3MIRROR_PREC_BITS`, then command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    /// mirror-map expansion order
    pub order: usize,
    pub precision_bits: u32,
    /// ball width accepted for monodromy entries
    pub tolerance: f64,
    pub integrality_order: usize,
    pub clausen_order: usize,
    pub ns_tolerance: f64,
    pub samples: usize,
    pub triangle_precision_bits: u32,
    pub triangle_tolerance: f64,
    /// points for the exact relation recovery
    pub griffiths_dwork_points: Vec<i64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            order: 20,
            precision_bits: 256,
            tolerance: 1e-30,
            integrality_order: 100,
            clausen_order: 200,
            ns_tolerance: 1e-20,
            samples: 200,
            triangle_precision_bits: 128,
            triangle_tolerance: 1e-10,
            griffiths_dwork_points: vec![2, 3, 5, 7, -2],
        }
    }
}

impl Config {
    pub fn from_toml(text: &str, path: &str) -> Result<Config, ConfigError> {
        let c: Config = toml::from_str(text).map_err(|source| ConfigError::Parse { path: path.into(), source })?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Config, ConfigError> {
        let p = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: p.clone(), source })?;
        Self::from_toml(&text, &p)
    }

    /// Apply `K3MIRROR_PREC_BITS` when set.
    pub fn with_env(mut self) -> Result<Config, ConfigError> {
        if let Ok(v) = std::env::var(PREC_ENV) {
            self.precision_bits = v.trim().parse().map_err(|_| ConfigError::Env { value: v.clone() })?;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(16..=960).contains(&self.precision_bits) || !(16..=960).contains(&self.triangle_precision_bits) {
            return Err(ConfigError::Invalid("precision must be between 16 and 960 bits".into()));
        }
        if self.order == 0 {
            return Err(ConfigError::Invalid("order must be positive".into()));
        }
        if self.samples < 3 {
            return Err(ConfigError::Invalid("at least three triangle samples".into()));
        }
        for t in [self.tolerance, self.ns_tolerance, self.triangle_tolerance] {
            if t.is_nan() || t <= 0.0 {
                return Err(ConfigError::Invalid(format!("tolerance {t} must be positive")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c = Config::from_toml("order = 1\nprecision-bits = 128\n", "inline").unwrap();
        assert_eq!(c.order, 1);
        assert_eq!(c.precision_bits, 128);
        assert_eq!(c.samples, 200);
    }

    #[test]
    fn parse_errors_report_the_line() {
        let e = Config::from_toml("order = 3\n\nprecision-bits = \"many\"\n", "bad.toml").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(Config::from_toml("colour = 1", "x").is_err());
    }
}

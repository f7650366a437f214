//! Run configuration: an optional TOML file whose keys mirror the flags.
//! Flags win over file values.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use lu3q_core::field::{parse_coefficients, prime_power, FieldError};
use lu3q_core::FieldSpec;

/// Anything wrong with the requested configuration. Maps to exit code 2.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("missing required setting '{0}'")]
    Missing(&'static str),
    #[error("invalid value for '{key}': {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("cannot read config {path}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config {path}")]
    Parse { path: PathBuf, source: Box<toml::de::Error> },
}

impl ConfigError {
    pub fn invalid(key: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid { key, reason: reason.into() }
    }
}

/// A scalar or a list in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    pub fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub q: Option<u64>,
    /// Comma-separated coefficients, constant term first.
    pub irr: Option<String>,
    pub system: Option<String>,
    pub transpose: Option<bool>,
    pub list: Option<String>,
    pub checks: Option<OneOrMany<String>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub channel: Option<String>,
    /// Crossover probability, or several for a curve.
    pub p: Option<OneOrMany<f64>>,
    pub decoder: Option<String>,
    pub trials: Option<u64>,
    pub max_iters: Option<usize>,
    pub normalization: Option<f64>,
    pub t_max: Option<u32>,
    pub q_odd: Option<Vec<u64>>,
    pub json: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse { path: path.to_owned(), source: Box::new(source) })
    }
}

/// GF(q), with an optional irreducible override.
pub fn build_field(q: u64, irr: Option<&str>) -> Result<FieldSpec, ConfigError> {
    let (p, t) = prime_power(q).ok_or(ConfigError::NotPrimePower(q))?;
    let spec = match irr {
        Some(s) => {
            let coeffs = parse_coefficients(s).map_err(|e| ConfigError::invalid("irr", e.to_string()))?;
            FieldSpec::new(p, t, Some(&coeffs))?
        }
        None => FieldSpec::new(p, t, None)?,
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_and_lists() {
        let c: RunConfig = toml::from_str("q = 4\np = 0.01\nchecks = [\"rank\", \"girth\"]\nmax-iters = 9").unwrap();
        assert_eq!(c.q, Some(4));
        assert_eq!(c.p.unwrap().into_vec(), vec![0.01]);
        assert_eq!(c.checks.unwrap().into_vec(), vec!["rank", "girth"]);
        assert_eq!(c.max_iters, Some(9));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<RunConfig>("qq = 4").is_err());
    }

    #[test]
    fn field_errors() {
        assert_eq!(build_field(6, None).unwrap_err().to_string(), "6 is not a prime power");
        assert!(build_field(8, Some("1,0,1,1")).is_ok());
        assert!(build_field(8, Some("1,0,0,1")).is_err());
    }
}

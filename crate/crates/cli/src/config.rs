//! Flat key-value experiment configuration.
//!
//! The file format is one `key = value` assignment per line, `#` starts a
//! comment, lists are comma-separated, and unbounded memory is spelled
//! `inf`. Missing keys fall back to the documented defaults; unknown keys
//! are an error. `parse` and `serialize` round-trip.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hidden_action::MemorySpan;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("invalid value for `{key}`: {message}")]
    InvalidValue { key: &'static str, message: String },
    #[error("`{key}` must not be empty")]
    EmptyList { key: &'static str },
}

/// Full description of one experiment: the scenario grid is the cross
/// product of the memory levels and volatility multipliers.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub memory_principal_levels: Vec<MemorySpan>,
    pub memory_agent_levels: Vec<MemorySpan>,
    /// Environment standard deviations as fractions of the benchmark
    /// outcome.
    pub sigma_multipliers: Vec<f64>,
    pub mu: f64,
    pub eta: f64,
    pub reservation_utility: f64,
    pub periods: u32,
    pub replications: u64,
    pub candidates_per_period: u32,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub emit_raw: bool,
}

impl Default for ExperimentConfig {
    /// The published parameterization: two memory levels per party, three
    /// volatility levels, 700 paths of 20 periods each.
    fn default() -> Self {
        ExperimentConfig {
            memory_principal_levels: vec![MemorySpan::Finite(3), MemorySpan::Unbounded],
            memory_agent_levels: vec![MemorySpan::Finite(3), MemorySpan::Unbounded],
            sigma_multipliers: vec![0.05, 0.25, 0.45],
            mu: 0.0,
            eta: 0.5,
            reservation_utility: 0.0,
            periods: 20,
            replications: 700,
            candidates_per_period: 2,
            base_seed: 42,
            output_dir: PathBuf::from("out"),
            emit_raw: false,
        }
    }
}

fn parse_list<T>(
    key: &'static str,
    raw: &str,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Vec<T>, ConfigError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| parse(item).map_err(|message| ConfigError::InvalidValue { key, message }))
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(key: &'static str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    raw.trim().parse().map_err(|e: T::Err| ConfigError::InvalidValue {
        key,
        message: e.to_string(),
    })
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = ExperimentConfig::default();
        for (index, raw_line) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Malformed {
                line,
                text: content.to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "memory_principal_levels" => {
                    config.memory_principal_levels =
                        parse_list("memory_principal_levels", value, |s| s.parse())?;
                }
                "memory_agent_levels" => {
                    config.memory_agent_levels =
                        parse_list("memory_agent_levels", value, |s| s.parse())?;
                }
                "sigma_multipliers" => {
                    config.sigma_multipliers = parse_list("sigma_multipliers", value, |s| {
                        s.parse::<f64>().map_err(|e| e.to_string())
                    })?;
                }
                "mu" => config.mu = parse_scalar("mu", value)?,
                "eta" => config.eta = parse_scalar("eta", value)?,
                "reservation_utility" => {
                    config.reservation_utility = parse_scalar("reservation_utility", value)?;
                }
                "periods" => config.periods = parse_scalar("periods", value)?,
                "replications" => config.replications = parse_scalar("replications", value)?,
                "candidates_per_period" => {
                    config.candidates_per_period = parse_scalar("candidates_per_period", value)?;
                }
                "base_seed" => config.base_seed = parse_scalar("base_seed", value)?,
                "output_dir" => config.output_dir = PathBuf::from(value),
                "emit_raw" => config.emit_raw = parse_scalar("emit_raw", value)?,
                other => {
                    return Err(ConfigError::UnknownKey { line, key: other.to_string() });
                }
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn serialize(&self) -> String {
        fn join<T: ToString>(items: &[T]) -> String {
            items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
        }
        let mut out = String::new();
        let _ = writeln!(out, "memory_principal_levels = {}", join(&self.memory_principal_levels));
        let _ = writeln!(out, "memory_agent_levels = {}", join(&self.memory_agent_levels));
        let _ = writeln!(out, "sigma_multipliers = {}", join(&self.sigma_multipliers));
        let _ = writeln!(out, "mu = {}", self.mu);
        let _ = writeln!(out, "eta = {}", self.eta);
        let _ = writeln!(out, "reservation_utility = {}", self.reservation_utility);
        let _ = writeln!(out, "periods = {}", self.periods);
        let _ = writeln!(out, "replications = {}", self.replications);
        let _ = writeln!(out, "candidates_per_period = {}", self.candidates_per_period);
        let _ = writeln!(out, "base_seed = {}", self.base_seed);
        let _ = writeln!(out, "output_dir = {}", self.output_dir.display());
        let _ = writeln!(out, "emit_raw = {}", self.emit_raw);
        out
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.memory_principal_levels.is_empty() {
            return Err(ConfigError::EmptyList { key: "memory_principal_levels" });
        }
        if self.memory_agent_levels.is_empty() {
            return Err(ConfigError::EmptyList { key: "memory_agent_levels" });
        }
        if self.sigma_multipliers.is_empty() {
            return Err(ConfigError::EmptyList { key: "sigma_multipliers" });
        }
        for &m in &self.sigma_multipliers {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(ConfigError::InvalidValue {
                    key: "sigma_multipliers",
                    message: format!("multiplier {m} must be non-negative and finite"),
                });
            }
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(ConfigError::InvalidValue {
                key: "eta",
                message: format!("{} must be positive and finite", self.eta),
            });
        }
        if !self.mu.is_finite() {
            return Err(ConfigError::InvalidValue {
                key: "mu",
                message: format!("{} must be finite", self.mu),
            });
        }
        if self.periods < 1 {
            return Err(ConfigError::InvalidValue {
                key: "periods",
                message: "must be at least 1".to_string(),
            });
        }
        if self.replications < 1 {
            return Err(ConfigError::InvalidValue {
                key: "replications",
                message: "must be at least 1".to_string(),
            });
        }
        if self.candidates_per_period < 1 {
            return Err(ConfigError::InvalidValue {
                key: "candidates_per_period",
                message: "must be at least 1".to_string(),
            });
        }
        for levels in [&self.memory_principal_levels, &self.memory_agent_levels] {
            if levels.iter().any(|l| matches!(l, MemorySpan::Finite(0))) {
                return Err(ConfigError::InvalidValue {
                    key: "memory levels",
                    message: "memory must be positive".to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn scenario_count(&self) -> usize {
        self.memory_principal_levels.len()
            * self.memory_agent_levels.len()
            * self.sigma_multipliers.len()
    }
}

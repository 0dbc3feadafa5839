//! Experiment configuration: `key = value` files with CLI-style overrides.

use std::path::PathBuf;

use thiserror::Error;

use crate::ppo::{PpoConfig, TrainSchedule};

/// Everything one experiment run needs. Build one with
/// [`RunConfig::default`], then layer a config file and/or individual
/// overrides on top via [`RunConfig::apply_file`] / [`RunConfig::set`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Netlist to attack (`.bench` or Yosys `.json`).
    pub circuit: PathBuf,
    pub n_triggers: usize,
    /// Fraction of nets ranked most suspicious that triggers may tap.
    pub suspicious_fraction: f64,
    /// Episode length before trigger-count scaling.
    pub steps_per_episode: u32,
    pub schedule: TrainSchedule,
    /// One full training run per seed.
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    pub podem_backtrack_limit: u32,
    pub ppo: PpoConfig,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            circuit: PathBuf::new(),
            n_triggers: 2,
            suspicious_fraction: 0.05,
            steps_per_episode: 100,
            schedule: TrainSchedule::default(),
            seeds: vec![1],
            out_dir: PathBuf::from("runs"),
            podem_backtrack_limit: 10_000,
            ppo: PpoConfig::default(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown configuration key `{key}`")]
    UnknownKey { key: String },
    #[error("value `{value}` is not valid for `{key}`: {reason}")]
    Invalid {
        key: String,
        value: String,
        reason: String,
    },
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_owned(),
        value: value.to_owned(),
        reason: reason.into(),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str, what: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| invalid(key, value, what))
}

fn parse_list<T: std::str::FromStr>(
    key: &str,
    value: &str,
    what: &str,
) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(|part| part.trim().parse().map_err(|_| invalid(key, value, what)))
        .collect()
}

impl RunConfig {
    /// Applies every `key = value` line of a config file. `#` starts a
    /// comment; blank lines are ignored.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.trim().to_owned(),
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one configuration key from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "circuit" => self.circuit = PathBuf::from(value),
            "n_triggers" => self.n_triggers = parse_num(key, value, "a positive integer")?,
            "suspicious_fraction" => {
                self.suspicious_fraction = parse_num(key, value, "a number")?
            }
            "steps_per_episode" => {
                self.steps_per_episode = parse_num(key, value, "a positive integer")?
            }
            "base_timesteps" => {
                self.schedule.base_timesteps = parse_num(key, value, "a positive integer")?
            }
            "growth" => self.schedule.growth = parse_num(key, value, "a number")?,
            "seeds" => self.seeds = parse_list(key, value, "comma-separated integers")?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "podem_backtrack_limit" => {
                self.podem_backtrack_limit = parse_num(key, value, "a positive integer")?
            }
            "clip" => self.ppo.clip = parse_num(key, value, "a number")?,
            "gamma" => self.ppo.gamma = parse_num(key, value, "a number")?,
            "gae_lambda" => self.ppo.gae_lambda = parse_num(key, value, "a number")?,
            "learning_rate" => self.ppo.learning_rate = parse_num(key, value, "a number")?,
            "rollout_len" => self.ppo.rollout_len = parse_num(key, value, "a positive integer")?,
            "epochs" => self.ppo.epochs = parse_num(key, value, "a positive integer")?,
            "minibatch_size" => {
                self.ppo.minibatch_size = parse_num(key, value, "a positive integer")?
            }
            "entropy_coef" => self.ppo.entropy_coef = parse_num(key, value, "a number")?,
            "value_coef" => self.ppo.value_coef = parse_num(key, value, "a number")?,
            "hidden" => self.ppo.hidden = parse_list(key, value, "comma-separated widths")?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    key: key.to_owned(),
                })
            }
        }
        Ok(())
    }

    /// Rejects configurations no run could execute.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, value: String, reason: &str| Err(invalid(key, &value, reason));
        if self.circuit.as_os_str().is_empty() {
            return bad("circuit", String::new(), "a netlist path is required");
        }
        if self.n_triggers < 2 {
            return bad(
                "n_triggers",
                self.n_triggers.to_string(),
                "a trigger AND needs at least 2 inputs",
            );
        }
        if !(0.0..=1.0).contains(&self.suspicious_fraction) {
            return bad(
                "suspicious_fraction",
                self.suspicious_fraction.to_string(),
                "must lie in [0, 1]",
            );
        }
        if self.steps_per_episode == 0 {
            return bad("steps_per_episode", "0".into(), "episodes need at least 1 step");
        }
        if self.seeds.is_empty() {
            return bad("seeds", String::new(), "at least one seed is required");
        }
        if self.ppo.rollout_len == 0 || self.ppo.minibatch_size == 0 || self.ppo.epochs == 0 {
            return bad(
                "rollout_len",
                "0".into(),
                "rollout_len, minibatch_size, and epochs must be positive",
            );
        }
        Ok(())
    }
}

//! Run configuration read from TOML.
//!
//! A minimal file is just `env = "CartPole-v1"`; every omitted `[train]`
//! field falls back to that environment's defaults and every omitted
//! `[search]` field to the standard search settings.

use std::path::{Path, PathBuf};

use eqas_core::{EnvKind, Error, SearchConfig, TrainConfig};
use serde::de::DeserializeOwned;
use serde::Serialize;
use toml::{Table, Value};

pub const DEFAULT_OUT: &str = "eqas-out";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub env: EnvKind,
    pub seed: u64,
    pub out: PathBuf,
    pub search: SearchConfig,
    pub train: TrainConfig,
}

impl RunConfig {
    pub fn for_env(env: EnvKind) -> Self {
        Self {
            env,
            seed: 0,
            out: PathBuf::from(DEFAULT_OUT),
            search: SearchConfig::default(),
            train: TrainConfig::for_env(env),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| {
            Error::Config(format!("invalid TOML: {}", e.message()))
        })?;
        Self::from_table(table, None)
    }

    pub fn from_file(path: &Path) -> Result<Self, Error> {
        Self::from_file_with_env(path, None)
    }

    /// `env_override` takes precedence over the file's `env` so per-env
    /// defaults follow the environment actually run.
    pub fn from_file_with_env(path: &Path, env_override: Option<EnvKind>) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let table: Table = text.parse().map_err(|e: toml::de::Error| {
            Error::Config(format!("{}: {}", path.display(), e.message()))
        })?;
        Self::from_table(table, env_override)
    }

    fn from_table(mut table: Table, env_override: Option<EnvKind>) -> Result<Self, Error> {
        let file_env = match table.remove("env") {
            Some(Value::String(s)) => {
                Some(s.parse::<EnvKind>().map_err(|e| field_error("env", e))?)
            }
            Some(other) => {
                return Err(Error::Config(format!(
                    "env: expected a string, got {other}"
                )))
            }
            None => None,
        };
        let env = env_override
            .or(file_env)
            .ok_or_else(|| Error::Config("env: missing environment name".into()))?;
        let mut cfg = Self::for_env(env);
        if let Some(v) = table.remove("seed") {
            cfg.seed = v
                .as_integer()
                .and_then(|i| u64::try_from(i).ok())
                .ok_or_else(|| {
                    Error::Config(format!("seed: expected a non-negative integer, got {v}"))
                })?;
        }
        if let Some(v) = table.remove("out") {
            cfg.out = v
                .as_str()
                .map(PathBuf::from)
                .ok_or_else(|| Error::Config(format!("out: expected a path string, got {v}")))?;
        }
        if let Some(v) = table.remove("search") {
            cfg.search = overlay("search", &cfg.search, v)?;
        }
        if let Some(v) = table.remove("train") {
            cfg.train = overlay("train", &cfg.train, v)?;
        }
        if let Some(key) = table.keys().next() {
            return Err(Error::Config(format!("{key}: unknown top-level key")));
        }
        cfg.sync_seed();
        Ok(cfg)
    }

    /// The root seed drives both search and training.
    pub fn sync_seed(&mut self) {
        self.search.seed = self.seed;
        self.train.seed = self.seed;
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.search.validate()?;
        self.train.validate()
    }
}

fn field_error(field: &str, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {e}"))
}

/// Apply the keys of `section` on top of `base`.
fn overlay<T: Serialize + DeserializeOwned>(
    name: &str,
    base: &T,
    section: Value,
) -> Result<T, Error> {
    let Value::Table(user) = section else {
        return Err(Error::Config(format!("{name}: expected a table")));
    };
    let mut merged = Table::try_from(base).map_err(|e| field_error(name, e))?;
    for (k, v) in user {
        if !merged.contains_key(&k) && !is_optional_field(name, &k) {
            return Err(Error::Config(format!("{name}.{k}: unknown field")));
        }
        merged.insert(k, v);
    }
    Value::Table(merged)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(format!("{name}: {}", e.message())))
}

// Optional fields are omitted from the serialized defaults when unset.
fn is_optional_field(section: &str, key: &str) -> bool {
    section == "search" && key == "mutation_prob"
}

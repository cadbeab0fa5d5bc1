use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::auth::HashCost;
use crate::store::{StoreConfig, StoreLocation};

/// Service configuration: a TOML document whose keys are these field names,
/// with `RECRUIT_<FIELD>` environment variables taking precedence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub bind: String,
    /// `0` binds any free port.
    pub port: u16,
    /// Store file path, or `:memory:`.
    pub store: String,
    pub busy_timeout_ms: u64,
    pub session_ttl_minutes: u32,
    pub upload_max_bytes: usize,
    pub allowed_extensions: Vec<String>,
    pub enforce_capacity: bool,
    /// Directory for resume attachments; kept in memory when absent.
    pub attachments_dir: Option<PathBuf>,
    pub password_memory_kib: u32,
    pub password_iterations: u32,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        let cost = HashCost::default();
        ServiceConfig {
            bind: "127.0.0.1".into(),
            port: 8080,
            store: "campus-recruit.json".into(),
            busy_timeout_ms: 5_000,
            session_ttl_minutes: 30,
            upload_max_bytes: 5 * 1024 * 1024,
            allowed_extensions: vec![".pdf".into(), ".doc".into(), ".docx".into()],
            enforce_capacity: true,
            attachments_dir: Some(PathBuf::from("attachments")),
            password_memory_kib: cost.memory_kib,
            password_iterations: cost.iterations,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config file {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid value for {var}: {value:?}")]
    Env { var: String, value: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

pub const ENV_PREFIX: &str = "RECRUIT_";

impl ServiceConfig {
    /// Loads from an optional file, then applies `RECRUIT_*` overrides from `env`.
    pub fn load(
        path: Option<&Path>,
        env: impl IntoIterator<Item = (String, String)>,
    ) -> Result<ServiceConfig, ConfigError> {
        let mut config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
                    path: path.to_path_buf(),
                    source,
                })?;
                toml::from_str(&text).map_err(|source| ConfigError::Parse {
                    path: path.to_path_buf(),
                    source,
                })?
            }
            None => ServiceConfig::default(),
        };
        for (var, value) in env {
            if let Some(field) = var.strip_prefix(ENV_PREFIX) {
                config.apply_env(field, &var, &value)?;
            }
        }
        config.validate()?;
        Ok(config)
    }

    fn apply_env(&mut self, field: &str, var: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(var: &str, value: &str) -> Result<T, ConfigError> {
            value.trim().parse().map_err(|_| ConfigError::Env {
                var: var.to_string(),
                value: value.to_string(),
            })
        }
        match field {
            "BIND" => self.bind = value.to_string(),
            "PORT" => self.port = parse(var, value)?,
            "STORE" => self.store = value.to_string(),
            "BUSY_TIMEOUT_MS" => self.busy_timeout_ms = parse(var, value)?,
            "SESSION_TTL_MINUTES" => self.session_ttl_minutes = parse(var, value)?,
            "UPLOAD_MAX_BYTES" => self.upload_max_bytes = parse(var, value)?,
            "ALLOWED_EXTENSIONS" => {
                self.allowed_extensions = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            "ENFORCE_CAPACITY" => self.enforce_capacity = parse(var, value)?,
            "ATTACHMENTS_DIR" => {
                self.attachments_dir = (!value.is_empty() && value != ":memory:").then(|| PathBuf::from(value))
            }
            "PASSWORD_MEMORY_KIB" => self.password_memory_kib = parse(var, value)?,
            "PASSWORD_ITERATIONS" => self.password_iterations = parse(var, value)?,
            // Unrelated variables sharing the prefix are ignored.
            _ => {}
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.session_ttl_minutes == 0 {
            return Err(ConfigError::Invalid("session_ttl_minutes must be positive".into()));
        }
        if self.allowed_extensions.is_empty() {
            return Err(ConfigError::Invalid("allowed_extensions must not be empty".into()));
        }
        if self.store.trim().is_empty() {
            return Err(ConfigError::Invalid("store must be a path or :memory:".into()));
        }
        Ok(())
    }

    pub fn store_config(&self) -> StoreConfig {
        let location = if self.store == ":memory:" {
            StoreLocation::Memory
        } else {
            StoreLocation::File(PathBuf::from(&self.store))
        };
        StoreConfig {
            location,
            busy_timeout_ms: self.busy_timeout_ms,
        }
    }

    pub fn hash_cost(&self) -> HashCost {
        HashCost {
            memory_kib: self.password_memory_kib,
            iterations: self.password_iterations,
        }
    }

    pub fn socket_addr(&self) -> String {
        format!("{}:{}", self.bind, self.port)
    }
}

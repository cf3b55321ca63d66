//! Runtime configuration: a TOML file, overridden by command line flags,
//! with `SHG_STORE` taking precedence over everything for the store path.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use shg::alpha::FeatureSet;
use shg::beta::RoleTable;
use shg::coref::CorefParams;
use shg::inference::LemmaSets;
use shg::learning::{GeneralizationConfig, RefineParams};

pub const STORE_ENV: &str = "SHG_STORE";
pub const DEFAULT_PORT: u16 = 8750;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// `F3`, `F5`, or a comma-separated feature list.
    pub features: String,
    pub forest: Option<PathBuf>,
    pub rules: Vec<PathBuf>,
    pub lemma_sets: LemmaSets,
    pub coref: CorefParams,
    pub roles: RoleTable,
    pub refine: RefineParams,
    pub mining: GeneralizationConfig,
    pub port: u16,
    pub bind: String,
    pub store: Option<PathBuf>,
    /// Session sidecar; defaults to `<store>.sessions.json`.
    pub sessions: Option<PathBuf>,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            features: "F5".into(),
            forest: None,
            rules: Vec::new(),
            lemma_sets: LemmaSets::default(),
            coref: CorefParams::default(),
            roles: RoleTable::default(),
            refine: RefineParams::default(),
            mining: GeneralizationConfig::default(),
            port: DEFAULT_PORT,
            bind: "127.0.0.1".into(),
            store: None,
            sessions: None,
            seed: 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Toml { path: PathBuf, message: String },
    #[error("{what} {path} does not exist")]
    Missing { what: &'static str, path: PathBuf },
    #[error("feature set: {0}")]
    Features(String),
}

/// Flag values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub store: Option<PathBuf>,
    pub features: Option<String>,
    pub rules: Vec<PathBuf>,
    pub theta: Option<f64>,
    pub theta_prime: Option<f64>,
    pub port: Option<u16>,
    pub bind: Option<String>,
    pub seed: Option<u64>,
    pub forest: Option<PathBuf>,
}

impl Config {
    pub fn from_toml(text: &str, path: &Path) -> Result<Config, ConfigError> {
        let mut c: Config = toml::from_str(text).map_err(|e| ConfigError::Toml {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        // relative paths in the file are relative to the file
        let base = path.parent().unwrap_or(Path::new(""));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        c.forest.as_mut().map(fix);
        c.store.as_mut().map(fix);
        c.sessions.as_mut().map(fix);
        c.rules.iter_mut().for_each(fix);
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Config::from_toml(&text, path)
    }

    /// File (if any), then flags, then the environment.
    pub fn resolve(file: Option<&Path>, o: Overrides, env_store: Option<PathBuf>) -> Result<Config, ConfigError> {
        let mut c = match file {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        if let Some(v) = o.store {
            c.store = Some(v);
        }
        if let Some(v) = o.features {
            c.features = v;
        }
        if !o.rules.is_empty() {
            c.rules = o.rules;
        }
        if let Some(v) = o.theta {
            c.coref.theta = v;
        }
        if let Some(v) = o.theta_prime {
            c.coref.theta_prime = v;
        }
        if let Some(v) = o.port {
            c.port = v;
        }
        if let Some(v) = o.bind {
            c.bind = v;
        }
        if let Some(v) = o.seed {
            c.seed = v;
        }
        if let Some(v) = o.forest {
            c.forest = Some(v);
        }
        if let Some(v) = env_store {
            c.store = Some(v);
        }
        c.validate()?;
        Ok(c)
    }

    /// Referenced input files must exist; the store may be created later.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.feature_set()?;
        if let Some(f) = &self.forest {
            if !f.exists() {
                return Err(ConfigError::Missing { what: "forest", path: f.clone() });
            }
        }
        for r in &self.rules {
            if !r.exists() {
                return Err(ConfigError::Missing { what: "rule file", path: r.clone() });
            }
        }
        Ok(())
    }

    pub fn feature_set(&self) -> Result<FeatureSet, ConfigError> {
        FeatureSet::named(&self.features).map_err(ConfigError::Features)
    }

    pub fn sessions_path(&self) -> Option<PathBuf> {
        self.sessions.clone().or_else(|| {
            self.store.as_ref().map(|s| {
                let mut name = s.as_os_str().to_owned();
                name.push(".sessions.json");
                PathBuf::from(name)
            })
        })
    }
}

use std::path::{Path, PathBuf};

use serde::Deserialize;

pub const CACHE_DIR_ENV: &str = "TAUFACT_CACHE_DIR";

/// Flat key-value settings read from a TOML file. Flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub format: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub table_cap: Option<u64>,
    pub partition_cap: Option<usize>,
    pub sweep_cap: Option<i64>,
    pub prime_bound_cap: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    /// Flag, then environment, then config file.
    pub fn resolve_cache_dir(&self, flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
            .or_else(|| self.cache_dir.clone())
    }
}

//! TOML configuration. Every command-line flag has a key here; flags win.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub max_carrier: Option<usize>,
    pub poset_cap: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub budget: Option<u64>,
    pub suite: Option<String>,
    pub max_size: Option<usize>,
    pub random: Option<usize>,
    pub seed: Option<u64>,
    pub random_max_size: Option<usize>,
    pub extra_families: Option<usize>,
    pub factor_max: Option<usize>,
    pub power_max: Option<usize>,
    pub universe_max: Option<usize>,
    pub reading: Option<String>,
    pub depth: Option<u32>,
    pub stage_depth: Option<u32>,
    pub json: Option<bool>,
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
        Ok(toml::from_str(&text)?)
    }
}

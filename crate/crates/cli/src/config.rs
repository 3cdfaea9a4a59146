// SPDX-License-Identifier: Apache-2.0

//! Optional TOML defaults read from the file named by `EDFKIT_CONFIG`.
//! Command-line flags always win over the file.

use std::path::PathBuf;

use serde::Deserialize;

pub const CONFIG_ENV: &str = "EDFKIT_CONFIG";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Node budget for `search`.
    pub search_budget: Option<u64>,
    /// Node budget for the strong-optimality search run by `rho`.
    pub classify_budget: Option<u64>,
    /// Largest `a` for which `bound` enumerates partitions.
    pub partition_cap: Option<u64>,
    pub catalog_dir: Option<PathBuf>,
    pub human: Option<bool>,
}

impl Config {
    pub fn load() -> Result<Self, String> {
        let Some(path) = std::env::var_os(CONFIG_ENV) else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read {}: {e}", PathBuf::from(&path).display()))?;
        toml::from_str(&text)
            .map_err(|e| format!("invalid config {}: {e}", PathBuf::from(&path).display()))
    }
}

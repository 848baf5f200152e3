//! Optional `key = value` configuration file.
//!
//! ```text
//! r_max = 20
//! z_pass = 4.0
//! enum_cap = 10000000
//! ```
//! Command-line flags win over the file.

use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Terms kept in the critical-window sums.
    pub r_max: Option<usize>,
    /// `|z|` threshold for Monte Carlo verdicts.
    pub z_pass: Option<f64>,
    pub enum_cap: Option<u64>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }
}

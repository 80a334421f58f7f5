//! `key = value` configuration read from the file named by `WALKDENS_CONFIG`.
//! Command-line flags take precedence over anything set here.

use std::collections::BTreeMap;
use std::path::Path;

use walkdens::numerics::{Precision, WorkingMode};

pub const ENV_VAR: &str = "WALKDENS_CONFIG";

const KEYS: &[&str] = &[
    "format",
    "target_rel_error",
    "max_terms",
    "working_mode",
    "seed",
    "samples",
    "bins",
    "step",
    "p4_seam_half_width",
];

#[derive(Clone, Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(format!("config line {}: unknown key {k:?}", i + 1));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
        Config::parse(&text)
    }

    /// The file named by the environment variable, or an empty config.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var_os(ENV_VAR) {
            Some(p) if !p.is_empty() => Config::load(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| format!("config: bad value {v:?} for {key}")),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn precision(&self) -> Result<Precision, String> {
        let d = Precision::default();
        let mode = match self.get_str("working_mode") {
            None | Some("double") => WorkingMode::Double,
            Some("double_double") => WorkingMode::DoubleDouble,
            Some(m) => return Err(format!("config: unknown working_mode {m:?}")),
        };
        Precision::new(
            self.get("target_rel_error")?.unwrap_or(d.target_rel_error),
            self.get("max_terms")?.unwrap_or(d.max_terms),
            mode,
        )
        .map_err(|e| e.to_string())
    }
}

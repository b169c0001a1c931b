//! Flat key-value configuration files.
//!
//! Format: one `key = value` pair per line; `#` starts a comment. All
//! experiment knobs flow through here so a run is reproducible from the
//! config file plus a master seed.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("bad config line {0}: {1}")]
    BadLine(usize, String),
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("key `{0}` has unparsable value `{1}`")]
    BadValue(String, String),
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    map: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::BadLine(i + 1, raw.to_string()))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { map })
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.map.insert(key.to_string(), value.to_string());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).unwrap_or(default)
    }

    pub fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.raw(key).ok_or_else(|| ConfigError::Missing(key.to_string()))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        self.parse_or(key, default)
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        self.parse_or(key, default)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        self.parse_or(key, default)
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        self.parse_or(key, default)
    }

    fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| ConfigError::BadValue(key.to_string(), v.to_string())),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_lookup() {
        let cfg = Config::parse("a = 1\n# comment\nsteps=500  # trailing\nname = mincut\n").unwrap();
        assert_eq!(cfg.u64_or("a", 0).unwrap(), 1);
        assert_eq!(cfg.u64_or("steps", 0).unwrap(), 500);
        assert_eq!(cfg.str_or("name", ""), "mincut");
        assert_eq!(cfg.f64_or("absent", 2.5).unwrap(), 2.5);
        assert!(cfg.require("absent").is_err());
        assert!(cfg.u64_or("name", 0).is_err());
    }

    #[test]
    fn bad_line_rejected() {
        assert!(Config::parse("just a line\n").is_err());
    }
}

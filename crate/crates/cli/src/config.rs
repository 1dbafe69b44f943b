//! Plain `key = value` configuration files with `#` comments.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, (usize, String)>,
}

impl FromStr for Config {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = k.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(Error::Config { line: i + 1, message: "empty key".into() });
            }
            if entries.insert(key.clone(), (i + 1, v.trim().to_string())).is_some() {
                return Err(Error::Config { line: i + 1, message: format!("duplicate key `{key}`") });
            }
        }
        Ok(Self { entries })
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn set(&mut self, key: &str, value: &str) {
        let line = self.entries.get(key).map_or(0, |e| e.0);
        self.entries.insert(key.to_string(), (line, value.to_string()));
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn parse_one<T: FromStr>(&self, key: &str, text: &str) -> Result<T> {
        let line = self.entries.get(key).map_or(0, |e| e.0);
        text.trim().parse().map_err(|_| Error::Config { line, message: format!("bad value `{text}` for `{key}`") })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key).map(|v| self.parse_one(key, v)).transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| Error::Config { line: 0, message: format!("missing key `{key}`") })
    }

    /// Comma-separated list.
    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(key).map(|v| v.split(',').map(|s| self.parse_one(key, s)).collect()).transpose()
    }

    /// Fails on keys outside `known`, so typos do not pass silently.
    pub fn check_keys(&self, known: &[&str]) -> Result<()> {
        for (k, (line, _)) in &self.entries {
            if !known.contains(&k.as_str()) {
                return Err(Error::Config { line: *line, message: format!("unknown key `{k}`") });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_lists_and_errors() {
        let c: Config = "# header\nkappa_over_g = 10, 5 ,2  # curves\nsweep=kappa_d\n\n".parse().unwrap();
        assert_eq!(c.list("kappa_over_g").unwrap().unwrap(), vec![10.0, 5.0, 2.0]);
        assert_eq!(c.raw("sweep"), Some("kappa_d"));
        assert_eq!(c.get::<f64>("missing").unwrap(), None);
        assert!(c.check_keys(&["sweep"]).is_err());
        assert!("a = 1\na = 2".parse::<Config>().is_err());
        assert!("novalue".parse::<Config>().is_err());
        let bad: Config = "x = abc".parse().unwrap();
        assert!(matches!(bad.get::<f64>("x"), Err(Error::Config { line: 1, .. })));
    }
}

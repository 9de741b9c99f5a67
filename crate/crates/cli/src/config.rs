//! Plain-text key-value run configuration.
//!
//! Format: one `key = value` pair per line, `#` starts a comment, blank
//! lines ignored. Keys mirror the CLI flag names (underscores or dashes both
//! accepted). Command-line flags override file values; built-in defaults fill
//! the rest.
//!
//! ```text
//! # example
//! seed = 42
//! symbols = 100000
//! n = 512
//! m = 32
//! l = 4
//! engine = aac
//! gamma-db = 5
//! iters = 10
//! rho = 1.0
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use trpapr::error::{Error, Result};

const KNOWN_KEYS: &[&str] = &[
    "seed",
    "threads",
    "quick",
    "out",
    "symbols",
    "n",
    "m",
    "l",
    "engine",
    "engines",
    "gamma-db",
    "iters",
    "rho",
    "beta-const",
    "prt-file",
    "method",
    "population",
    "pc",
    "pm",
    "elites",
    "start",
    "offset",
    "trials",
    "budget",
    "threshold",
    "param",
    "values",
    "grid-min",
    "grid-max",
    "grid-step",
];

/// Key-value settings loaded from a config file.
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-").to_ascii_lowercase()
}

impl FileConfig {
    pub fn empty() -> Self {
        FileConfig::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!(
                    "config line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                ))
            })?;
            let key = normalize(key);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::invalid(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(|s| s.as_str())
    }

    /// `flag` (CLI) wins over the file value; `default` fills the rest.
    pub fn resolve<T: std::str::FromStr>(
        &self,
        key: &str,
        flag: Option<T>,
        default: T,
    ) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.raw(key) {
            Some(text) => text
                .parse()
                .map_err(|_| Error::invalid(format!("config key {key:?}: cannot parse {text:?}"))),
            None => Ok(default),
        }
    }

    /// Like [`resolve`](Self::resolve) but with no default: `None` when unset.
    pub fn resolve_opt<T: std::str::FromStr>(
        &self,
        key: &str,
        flag: Option<T>,
    ) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            Some(text) => text
                .parse()
                .map(Some)
                .map_err(|_| Error::invalid(format!("config key {key:?}: cannot parse {text:?}"))),
            None => Ok(None),
        }
    }

    pub fn resolve_flag(&self, key: &str, flag: bool) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        match self.raw(key) {
            Some(text) => match text {
                "true" | "1" | "yes" | "on" => Ok(true),
                "false" | "0" | "no" | "off" => Ok(false),
                other => Err(Error::invalid(format!(
                    "config key {key:?}: expected a boolean, got {other:?}"
                ))),
            },
            None => Ok(false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_blanks() {
        let cfg = FileConfig::parse("# run\nseed = 7\n\nGAMMA_DB = 5.5 # inline\n").unwrap();
        assert_eq!(cfg.raw("seed"), Some("7"));
        assert_eq!(cfg.raw("gamma-db"), Some("5.5"));
        assert_eq!(cfg.raw("gamma_db"), Some("5.5"));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(FileConfig::parse("bogus = 1").is_err());
        assert!(FileConfig::parse("seed 7").is_err());
    }

    #[test]
    fn flag_overrides_file_overrides_default() {
        let cfg = FileConfig::parse("iters = 20").unwrap();
        assert_eq!(cfg.resolve("iters", Some(3usize), 10).unwrap(), 3);
        assert_eq!(cfg.resolve("iters", None::<usize>, 10).unwrap(), 20);
        assert_eq!(cfg.resolve("rho", None::<f64>, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn boolean_values() {
        let cfg = FileConfig::parse("quick = true").unwrap();
        assert!(cfg.resolve_flag("quick", false).unwrap());
        let cfg = FileConfig::parse("quick = nah");
        assert!(cfg.unwrap().resolve_flag("quick", false).is_err());
    }
}

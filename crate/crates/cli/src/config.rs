use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{key}` for experiment `{experiment}`")]
    UnknownKey { key: String, experiment: String },
    #[error("key `{key}`: cannot read {value:?} as {expected}")]
    BadValue { key: String, value: String, expected: &'static str },
    #[error("unknown experiment `{0}` (see `list`)")]
    UnknownExperiment(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn parse_number(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.trim().parse().ok(),
    }
}

/// A declared parameter with its default.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

/// Raw `key = value` settings in the order of their sources; later
/// settings override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    /// Lines `key = value`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) if !k.trim().is_empty() => c.set(k.trim(), v.trim()),
                _ => return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() }),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.values.insert(key.replace('-', "_"), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// Defaults overlaid with these settings; keys outside `specs` are an error.
    pub fn resolve(&self, experiment: &str, specs: &[ParamSpec]) -> Result<Params, ConfigError> {
        if let Some(k) = self.values.keys().find(|k| !specs.iter().any(|s| s.key == k.as_str())) {
            return Err(ConfigError::UnknownKey { key: k.clone(), experiment: experiment.to_string() });
        }
        let map = specs.iter().map(|s| (s.key, self.get(s.key).unwrap_or(s.default).to_string())).collect();
        Ok(Params { map })
    }
}

/// Resolved parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    map: BTreeMap<&'static str, String>,
}

impl Params {
    pub fn raw(&self, key: &str) -> &str {
        self.map.get(key).map(String::as_str).unwrap_or_else(|| panic!("undeclared parameter {key}"))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, expected: &'static str) -> Result<T, ConfigError> {
        let v = self.raw(key);
        v.parse().map_err(|_| ConfigError::BadValue { key: key.to_string(), value: v.to_string(), expected })
    }

    /// A decimal, `inf`, or a fraction such as `4/3`.
    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.raw(key);
        parse_number(v).ok_or_else(|| ConfigError::BadValue { key: key.to_string(), value: v.to_string(), expected: "a number" })
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn u64(&self, key: &str) -> Result<u64, ConfigError> {
        self.parsed(key, "an unsigned integer")
    }

    pub fn string(&self, key: &str) -> String {
        self.raw(key).to_string()
    }

    fn list<T: std::str::FromStr>(&self, key: &str, expected: &'static str) -> Result<Vec<T>, ConfigError> {
        let v = self.raw(key);
        v.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| ConfigError::BadValue { key: key.to_string(), value: v.to_string(), expected }))
            .collect()
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>, ConfigError> {
        self.list(key, "a comma-separated list of integers")
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.list(key, "a comma-separated list of numbers")
    }

    /// `|`-separated items, for lists of specs that contain commas.
    pub fn spec_list(&self, key: &str) -> Vec<String> {
        self.raw(key).split('|').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
    }
}

//! Plain-text `key = value` scenario configuration.

use std::collections::BTreeMap;
use std::fmt;

/// Parameter kinds accepted by scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    /// Strictly positive float; every tolerance uses this kind.
    Positive,
    Count,
    FloatList,
    Text,
}

/// A declared parameter with its default.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
}

pub const fn key(name: &'static str, kind: Kind, default: &'static str) -> Key {
    Key { name, kind, default }
}

/// Configuration error with the offending line, when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn fail(line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

/// Validated parameters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn float(&self, name: &str) -> f64 {
        self.values[name].parse().expect("validated float")
    }

    pub fn count(&self, name: &str) -> usize {
        self.values[name].parse().expect("validated count")
    }

    pub fn list(&self, name: &str) -> Vec<f64> {
        parse_list(&self.values[name]).expect("validated list")
    }

    pub fn text(&self, name: &str) -> &str {
        &self.values[name]
    }

    /// `key=value` pairs in key order, for output headers.
    pub fn describe(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().ok()).collect()
}

fn check_value(k: &Key, value: &str, line: Option<usize>) -> Result<(), ConfigError> {
    let bad = |what: &str| fail(line, format!("`{}` must be {what}, got `{value}`", k.name));
    match k.kind {
        Kind::Float => value.parse::<f64>().ok().filter(|v| v.is_finite()).map(|_| ()).ok_or_else(|| bad("a finite number")),
        Kind::Positive => value
            .parse::<f64>()
            .ok()
            .filter(|v| *v > 0.0 && v.is_finite())
            .map(|_| ())
            .ok_or_else(|| bad("a positive number")),
        Kind::Count => value.parse::<usize>().map(|_| ()).map_err(|_| bad("a non-negative integer")),
        Kind::FloatList => parse_list(value)
            .filter(|l| !l.is_empty() && l.iter().all(|v| v.is_finite()))
            .map(|_| ())
            .ok_or_else(|| bad("a comma-separated list of numbers")),
        Kind::Text => Ok(()),
    }
}

/// Parses `text` against the declared keys. Blank lines and `#` comments are
/// skipped; unknown or repeated keys are rejected with their line number.
pub fn parse(text: &str, keys: &[Key]) -> Result<Params, ConfigError> {
    let mut values: BTreeMap<String, String> = BTreeMap::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = Some(index + 1);
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (name, value) = content
            .split_once('=')
            .ok_or_else(|| fail(line, format!("expected `key = value`, got `{content}`")))?;
        let (name, value) = (name.trim(), value.trim());
        let k = keys
            .iter()
            .find(|k| k.name == name)
            .ok_or_else(|| fail(line, format!("unknown key `{name}`")))?;
        if let Some(first) = seen.insert(name.to_string(), index + 1) {
            return Err(fail(line, format!("key `{name}` already set on line {first}")));
        }
        check_value(k, value, line)?;
        values.insert(name.to_string(), value.to_string());
    }
    for k in keys {
        if !values.contains_key(k.name) {
            check_value(k, k.default, None)?;
            values.insert(k.name.to_string(), k.default.to_string());
        }
    }
    Ok(Params { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    const KEYS: [Key; 3] = [
        key("a", Kind::Float, "1.0"),
        key("tol", Kind::Positive, "1e-6"),
        key("bs", Kind::FloatList, "0.05,0.1"),
    ];

    #[test]
    fn defaults_and_overrides() {
        let p = parse("# comment\n\na = 2.5  # trailing\n", &KEYS).unwrap();
        assert_eq!(p.float("a"), 2.5);
        assert_eq!(p.float("tol"), 1e-6);
        assert_eq!(p.list("bs"), vec![0.05, 0.1]);
    }

    #[test]
    fn unknown_key_names_line() {
        let err = parse("a = 1\nfoo = 2\n", &KEYS).unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.to_string().contains("unknown key `foo`"));
    }

    #[test]
    fn tolerances_must_be_positive() {
        let err = parse("tol = -1\n", &KEYS).unwrap_err();
        assert_eq!(err.line, Some(1));
    }

    #[test]
    fn malformed_lines_and_duplicates() {
        assert_eq!(parse("a 1\n", &KEYS).unwrap_err().line, Some(1));
        assert_eq!(parse("a=1\na=2\n", &KEYS).unwrap_err().line, Some(2));
        assert!(parse("bs = 1,x\n", &KEYS).is_err());
    }
}

//! Run configuration files.
//!
//! ```text
//! # comments start with '#'
//! [profile]
//! shape = grooves
//! period = 4 um
//! depth = 250 nm
//! width_fraction = 0.5
//!
//! [grid]
//! kz = lin(0.25, 10, 40)
//! z = log(1, 1e5, 51) nm
//! ```
//!
//! Physical quantities must carry a unit. Grids are `lin(a, b, n)`,
//! `log(a, b, n)` or comma-separated lists, with one trailing unit that
//! applies to every element; `[]` is the empty grid.

use std::collections::BTreeMap;
use std::fmt;

use crate::units::{converter, Dim};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line: Some(line),
        message: message.into(),
    })
}

const SCHEMA: &[(&str, &[(&str, Dim)])] = &[
    (
        "atom",
        &[
            ("model", Dim::Text),
            ("alpha0", Dim::Polarizability),
            ("frequency", Dim::Frequency),
            ("wavelength", Dim::Length),
            ("mass", Dim::Mass),
            ("table", Dim::Text),
            ("units", Dim::Text),
        ],
    ),
    (
        "material",
        &[
            ("model", Dim::Text),
            ("plasma_frequency", Dim::Frequency),
            ("damping", Dim::Frequency),
            ("table", Dim::Text),
            ("units", Dim::Text),
        ],
    ),
    ("kernel", &[("kind", Dim::Text), ("provider", Dim::Text)]),
    (
        "profile",
        &[
            ("shape", Dim::Text),
            ("period", Dim::Length),
            ("amplitude", Dim::Length),
            ("depth", Dim::Length),
            ("width", Dim::Length),
            ("width_fraction", Dim::Dimensionless),
            ("harmonics", Dim::Count),
            ("table", Dim::Text),
        ],
    ),
    (
        "trap",
        &[
            ("omega_x", Dim::Frequency),
            ("x0", Dim::Length),
            ("z_cm", Dim::Length),
            ("amplitude", Dim::Length),
            ("tf_radius", Dim::Length),
        ],
    ),
    (
        "grid",
        &[
            ("kz", Dim::Dimensionless),
            ("z", Dim::Length),
            ("x", Dim::Length),
            ("k", Dim::Wavevector),
            ("radius", Dim::Length),
        ],
    ),
    (
        "sweep",
        &[("z", Dim::Length), ("sensitivities", Dim::Dimensionless)],
    ),
];

fn lookup(section: &str, key: &str) -> Option<Dim> {
    SCHEMA
        .iter()
        .find(|(s, _)| *s == section)?
        .1
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, d)| *d)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    /// SI values; a scalar is a one-element list.
    Numbers(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub dim: Dim,
    pub value: Value,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<(String, String), Entry>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut section: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                if !SCHEMA.iter().any(|(s, _)| *s == name) {
                    return err(line, format!("unknown section [{name}]"));
                }
                section = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return err(line, format!("expected `key = value`, found `{content}`"));
            };
            let key = key.trim();
            let Some(sec) = section.as_deref() else {
                return err(line, format!("`{key}` appears before any [section]"));
            };
            let Some(dim) = lookup(sec, key) else {
                return err(line, format!("unknown key `{key}` in [{sec}]"));
            };
            let value = parse_value(value.trim(), dim).or_else(|m| err(line, format!("`{key}`: {m}")))?;
            let slot = (sec.to_string(), key.to_string());
            if let Some(prev) = entries.get(&slot) {
                let prev: &Entry = prev;
                return err(line, format!("`{key}` in [{sec}] already set on line {}", prev.line));
            }
            entries.insert(slot, Entry { line, dim, value });
        }
        Ok(Self { entries })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    pub fn text(&self, section: &str, key: &str) -> Option<&str> {
        match &self.get(section, key)?.value {
            Value::Text(s) => Some(s),
            Value::Numbers(_) => None,
        }
    }

    pub fn list(&self, section: &str, key: &str) -> Option<&[f64]> {
        match &self.get(section, key)?.value {
            Value::Numbers(v) => Some(v),
            Value::Text(_) => None,
        }
    }

    /// A single number; lists of any other length are rejected.
    pub fn scalar(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        let Some(entry) = self.get(section, key) else {
            return Ok(None);
        };
        match &entry.value {
            Value::Numbers(v) if v.len() == 1 => Ok(Some(v[0])),
            _ => err(entry.line, format!("`{key}` must be a single value")),
        }
    }

    pub fn count(&self, section: &str, key: &str) -> Result<Option<usize>, ConfigError> {
        Ok(self.scalar(section, key)?.map(|v| v as usize))
    }

    pub fn line(&self, section: &str, key: &str) -> Option<usize> {
        self.get(section, key).map(|e| e.line)
    }
}

/// Splits `2 um` or `lin(0, 4, 81) um` into numeric part and unit.
fn split_unit(s: &str) -> (&str, Option<&str>) {
    if s.ends_with(')') || s.ends_with(']') {
        return (s, None);
    }
    match s.rsplit_once(char::is_whitespace) {
        Some((head, tail)) if tail.parse::<f64>().is_err() && !tail.ends_with(',') => (head.trim_end(), Some(tail)),
        _ => (s, None),
    }
}

fn number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{s}` is not a number"))
}

fn parse_value(s: &str, dim: Dim) -> Result<Value, String> {
    if dim == Dim::Text {
        if s.is_empty() {
            return Err("empty value".into());
        }
        return Ok(Value::Text(s.trim_matches('"').to_string()));
    }
    let (body, unit) = split_unit(s);
    let numbers = parse_numbers(body)?;
    let numbers = match (dim.is_physical(), unit) {
        (true, None) => {
            return Err(format!(
                "a physical quantity needs a unit suffix (SI unit: {})",
                dim.si_unit()
            ))
        }
        (false, Some(u)) => return Err(format!("dimensionless value takes no unit, found `{u}`")),
        (true, Some(u)) => {
            let f = converter(dim, u)?;
            numbers.into_iter().map(f).collect()
        }
        (false, None) => numbers,
    };
    if dim == Dim::Count
        && (numbers.len() != 1 || numbers[0] < 0.0 || numbers[0].fract() != 0.0) {
            return Err("expected a non-negative integer".into());
        }
    Ok(Value::Numbers(numbers))
}

fn parse_numbers(body: &str) -> Result<Vec<f64>, String> {
    let body = body.trim();
    if body == "[]" {
        return Ok(Vec::new());
    }
    for (name, log) in [("lin", false), ("log", true)] {
        if let Some(args) = body.strip_prefix(name).map(str::trim_start) {
            let inner = args
                .strip_prefix('(')
                .and_then(|a| a.strip_suffix(')'))
                .ok_or_else(|| format!("malformed grid `{body}`, expected {name}(start, stop, count)"))?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("{name}() takes start, stop and count"));
            }
            let (a, b) = (number(parts[0])?, number(parts[1])?);
            let n = number(parts[2])?;
            if n < 0.0 || n.fract() != 0.0 {
                return Err(format!("grid count must be a non-negative integer, got {}", parts[2].trim()));
            }
            let n = n as usize;
            if log && !(a > 0.0 && b > 0.0) {
                return Err("log() grid bounds must be positive".into());
            }
            return Ok(grid(a, b, n, log));
        }
    }
    let body = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(body);
    body.split(',').map(number).collect()
}

fn grid(a: f64, b: f64, n: usize, log: bool) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    b
                } else if log {
                    (a.ln() + t * (b.ln() - a.ln())).exp()
                } else {
                    a + t * (b - a)
                }
            })
            .collect(),
    }
}

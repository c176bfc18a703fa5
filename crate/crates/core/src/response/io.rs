//! Plain-text two-column tables.
//!
//! ```text
//! # gold, synthetic
//! units: eV
//! 0.10  1.2e3
//! 0.12  9.8e2
//! ```
//!
//! `#` starts a comment line, blank lines are ignored, columns are separated
//! by whitespace. Lines of the form `key: value` are header directives:
//! `units`, `tail_exponent` and `provenance`.

use std::path::Path;

use crate::constants::{ev_to_rad_per_s, AU_POLARIZABILITY};
use crate::response::{OpticalDataTable, TabulatedPolarizability};
use crate::{Error, Result};

/// Rows and directives of a two-column file, with 1-based source lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ColumnFile {
    pub rows: Vec<(usize, f64, f64)>,
    pub units: Option<String>,
    pub tail_exponent: Option<f64>,
    pub provenance: Option<String>,
}

pub fn parse_columns(text: &str) -> Result<ColumnFile> {
    let mut out = ColumnFile::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = directive(line) {
            let value = value.trim();
            match key {
                "units" => out.units = Some(value.to_string()),
                "tail_exponent" => {
                    out.tail_exponent = Some(value.parse().map_err(|_| {
                        Error::data(Some(line_no), format!("invalid tail exponent '{value}'"))
                    })?)
                }
                "provenance" => out.provenance = Some(value.to_string()),
                other => {
                    return Err(Error::data(
                        Some(line_no),
                        format!("unknown header directive '{other}'"),
                    ))
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::data(
                Some(line_no),
                format!("expected two numeric columns, found {} fields: '{line}'", fields.len()),
            ));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::data(Some(line_no), format!("malformed number '{s}'")))
        };
        out.rows.push((line_no, parse(fields[0])?, parse(fields[1])?));
    }
    Ok(out)
}

fn directive(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once(':')?;
    let key = key.trim();
    if !key.is_empty() && key.chars().all(|c| c.is_ascii_alphabetic() || c == '_') {
        Some((key, value))
    } else {
        None
    }
}

/// Optical absorption table: ω (rad/s, or eV with `units: eV`) and ε″.
/// `units_override` takes precedence over the file's own directive.
pub fn parse_optical(text: &str, units_override: Option<&str>, label: &str) -> Result<OpticalDataTable> {
    let file = parse_columns(text)?;
    let units = units_override
        .map(str::to_string)
        .or(file.units.clone())
        .unwrap_or_else(|| "rad/s".to_string());
    let to_rad: fn(f64) -> f64 = match units.as_str() {
        "rad/s" => |w: f64| w,
        "eV" | "ev" => ev_to_rad_per_s,
        other => return Err(Error::data(None, format!("unsupported frequency units '{other}'"))),
    };
    for &(line, w, e) in &file.rows {
        if !(w > 0.0) {
            return Err(Error::data(Some(line), format!("frequency must be positive, got {w}")));
        }
        if e < 0.0 {
            return Err(Error::data(Some(line), format!("negative ε″ = {e}")));
        }
    }
    let rows = file.rows.iter().map(|&(_, w, e)| (to_rad(w), e)).collect();
    let provenance = file.provenance.clone().unwrap_or_else(|| label.to_string());
    match file.tail_exponent {
        Some(p) => OpticalDataTable::with_tail_exponent(rows, p, provenance),
        None => OpticalDataTable::new(rows, provenance),
    }
}

/// Polarizability table: ξ (rad/s) and α (C·m²/V, or atomic units with
/// `units: au`). Rows are sorted by ξ before validation.
pub fn parse_polarizability(
    text: &str,
    units_override: Option<&str>,
    label: &str,
) -> Result<TabulatedPolarizability> {
    let file = parse_columns(text)?;
    let units = units_override
        .map(str::to_string)
        .or(file.units.clone())
        .unwrap_or_else(|| "SI".to_string());
    let factor = match units.as_str() {
        "au" | "a.u." => AU_POLARIZABILITY,
        "SI" | "C*m^2/V" | "C.m2/V" => 1.0,
        other => {
            return Err(Error::data(None, format!("unsupported polarizability units '{other}'")))
        }
    };
    let mut rows = file.rows.clone();
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    for w in rows.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(Error::data(Some(w[1].0), format!("duplicate frequency {}", w[1].1)));
        }
    }
    for &(line, xi, a) in &rows {
        if !(xi >= 0.0) || !(a > 0.0) {
            return Err(Error::data(Some(line), "polarizability rows need ξ ≥ 0 and α > 0"));
        }
    }
    for w in rows.windows(2) {
        if w[1].2 > w[0].2 {
            return Err(Error::data(Some(w[1].0), "α(iξ) must be non-increasing in ξ"));
        }
    }
    let samples = rows.iter().map(|&(_, xi, a)| (xi, a * factor)).collect();
    let provenance = file.provenance.clone().unwrap_or_else(|| label.to_string());
    match file.tail_exponent {
        Some(p) => TabulatedPolarizability::with_tail_exponent(samples, p, provenance),
        None => TabulatedPolarizability::new(samples, provenance),
    }
}

pub fn read_optical(path: &Path, units_override: Option<&str>) -> Result<OpticalDataTable> {
    let text = read(path)?;
    parse_optical(&text, units_override, &path.display().to_string())
}

pub fn read_polarizability(path: &Path, units_override: Option<&str>) -> Result<TabulatedPolarizability> {
    let text = read(path)?;
    parse_polarizability(&text, units_override, &path.display().to_string())
}

pub(crate) fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::data(None, format!("cannot read {}: {e}", path.display())))
}

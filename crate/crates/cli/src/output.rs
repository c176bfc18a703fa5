//! CSV and JSON table writers with a self-describing metadata header.

use lateral_casimir::scenarios::{Cell, Table};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A resolved input parameter, SI value plus unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub value: ParamValue,
    pub unit: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl Param {
    pub fn number(name: &str, value: f64, unit: &'static str) -> Self {
        Self {
            name: name.to_string(),
            value: ParamValue::Number(value),
            unit,
        }
    }

    pub fn text(name: &str, value: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            value: ParamValue::Text(value.into()),
            unit: "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub scenario: String,
    /// Kernel kind and how it was chosen (`default` or `config`).
    pub kernel: Option<(String, String)>,
    pub params: Vec<Param>,
    pub config_hash: String,
}

pub fn config_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}

/// Nine significant digits in scientific notation.
pub fn sci(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.8e}");
    // 1.00000000e-5 -> 1.00000000e-05
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ("-", d),
                None => ("+", exp),
            };
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

fn version() -> String {
    format!("lateral-casimir {}", env!("CARGO_PKG_VERSION"))
}

fn header_name(name: &str, unit: &str) -> String {
    if unit.is_empty() {
        name.to_string()
    } else {
        format!("{name} [{unit}]")
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Number(v) => sci(*v),
        Cell::Flag(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

pub fn render(table: &Table, meta: &Metadata, format: Format) -> String {
    match format {
        Format::Csv => render_csv(table, meta),
        Format::Json => render_json(table, meta),
    }
}

fn param_text(p: &Param) -> String {
    match &p.value {
        ParamValue::Number(v) if p.unit.is_empty() => sci(*v),
        ParamValue::Number(v) => format!("{} {}", sci(*v), p.unit),
        ParamValue::Text(s) => s.clone(),
    }
}

fn render_csv(table: &Table, meta: &Metadata) -> String {
    let mut out = String::new();
    out.push_str(&format!("# scenario: {}\n", meta.scenario));
    if let Some((kind, source)) = &meta.kernel {
        out.push_str(&format!("# kernel: {kind} ({source})\n"));
    }
    out.push_str(&format!("# version: {}\n", version()));
    out.push_str(&format!("# config_hash: {}\n", meta.config_hash));
    for p in &meta.params {
        out.push_str(&format!("# param {} = {}\n", p.name, param_text(p)));
    }
    for w in &table.warnings {
        out.push_str(&format!("# warning: {w}\n"));
    }
    let header: Vec<String> = table.columns.iter().map(|c| header_name(&c.name, &c.unit)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(cell_text).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// The JSON number for the 9-digit rendering, so both formats agree.
fn json_number(v: f64) -> Value {
    sci(v)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

fn render_json(table: &Table, meta: &Metadata) -> String {
    let params: Vec<Value> = meta
        .params
        .iter()
        .map(|p| {
            let value = match &p.value {
                ParamValue::Number(v) => json_number(*v),
                ParamValue::Text(s) => Value::String(s.clone()),
            };
            json!({ "name": p.name, "value": value, "unit": p.unit })
        })
        .collect();
    let mut metadata = Map::new();
    metadata.insert("scenario".into(), json!(meta.scenario));
    if let Some((kind, source)) = &meta.kernel {
        metadata.insert("kernel".into(), json!(kind));
        metadata.insert("kernel_source".into(), json!(source));
    }
    metadata.insert("version".into(), json!(version()));
    metadata.insert("config_hash".into(), json!(meta.config_hash));
    metadata.insert("parameters".into(), Value::Array(params));
    metadata.insert("warnings".into(), json!(table.warnings));
    let columns: Vec<Value> = table
        .columns
        .iter()
        .map(|c| json!({ "name": c.name, "unit": c.unit }))
        .collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            Value::Array(
                r.iter()
                    .map(|c| match c {
                        Cell::Number(v) => json_number(*v),
                        Cell::Flag(b) => Value::Bool(*b),
                        Cell::Text(s) => Value::String(s.clone()),
                    })
                    .collect(),
            )
        })
        .collect();
    let doc = json!({ "metadata": Value::Object(metadata), "columns": columns, "rows": rows });
    let mut s = serde_json::to_string_pretty(&doc).expect("tables serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sci(0.28), "2.80000000e-01");
        assert_eq!(sci(-1234.5), "-1.23450000e+03");
        assert_eq!(sci(0.0), "0.00000000e+00");
        assert_eq!(sci(1e-300), "1.00000000e-300");
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(config_hash(""), "e3b0c44298fc1c14");
    }
}

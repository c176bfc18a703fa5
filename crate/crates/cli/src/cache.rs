//! Cached imaginary-axis permittivity tables derived from optical data.
//!
//! The cache lives next to the input file, or in the directory named by
//! `LATERAL_CASIMIR_CACHE_DIR`. A cache entry records the SHA-256 of its
//! source and is ignored once the source changes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use lateral_casimir::response::io::{parse_columns, read_optical};
use lateral_casimir::response::{ImaginaryAxisTable, OpticalDataTable, DEFAULT_KK_GRID};
use sha2::{Digest, Sha256};

pub const CACHE_DIR_ENV: &str = "LATERAL_CASIMIR_CACHE_DIR";

const HASH_TAG: &str = "# source-sha256: ";

pub fn cache_path(source: &Path) -> PathBuf {
    let name = format!(
        "{}.imag.dat",
        source.file_name().map(|n| n.to_string_lossy()).unwrap_or_default()
    );
    match std::env::var_os(CACHE_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(name),
        _ => source.with_file_name(name),
    }
}

fn source_hash(source: &Path) -> Result<String> {
    let bytes = std::fs::read(source).with_context(|| format!("cannot read {}", source.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn render(table: &ImaginaryAxisTable, source: &Path, hash: &str) -> String {
    let mut out = String::new();
    out.push_str("# imaginary-axis permittivity: xi [rad/s], epsilon(i xi)\n");
    let _ = writeln!(out, "# source: {}", source.display());
    let _ = writeln!(out, "{HASH_TAG}{hash}");
    let _ = writeln!(out, "provenance: {}", table.provenance());
    for (xi, eps) in table.samples() {
        let _ = writeln!(out, "{xi:e} {eps:e}");
    }
    out
}

fn load(path: &Path, hash: &str) -> Option<ImaginaryAxisTable> {
    let text = std::fs::read_to_string(path).ok()?;
    let recorded = text.lines().find_map(|l| l.strip_prefix(HASH_TAG))?;
    if recorded.trim() != hash {
        return None;
    }
    let file = parse_columns(&text).ok()?;
    let samples = file.rows.iter().map(|r| (r.1, r.2)).collect();
    ImaginaryAxisTable::new(samples, file.provenance.unwrap_or_default()).ok()
}

/// Transforms an optical table and writes the cache entry.
pub fn ingest(source: &Path, units: Option<&str>) -> Result<(OpticalDataTable, ImaginaryAxisTable, PathBuf)> {
    let optical = read_optical(source, units)?;
    let table = ImaginaryAxisTable::from_optical(&optical, DEFAULT_KK_GRID)?;
    let hash = source_hash(source)?;
    let path = cache_path(source);
    std::fs::write(&path, render(&table, source, &hash))
        .with_context(|| format!("cannot write cache {}", path.display()))?;
    Ok((optical, table, path))
}

/// A valid cache entry when present, otherwise the transform in memory.
pub fn load_or_compute(source: &Path, units: Option<&str>) -> Result<ImaginaryAxisTable> {
    let hash = source_hash(source)?;
    if let Some(table) = load(&cache_path(source), &hash) {
        log::debug!("using cached permittivity for {}", source.display());
        return Ok(table);
    }
    let optical = read_optical(source, units)?;
    Ok(ImaginaryAxisTable::from_optical(&optical, DEFAULT_KK_GRID)?)
}

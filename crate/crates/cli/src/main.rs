//! `lateral-casimir`: parameter sweeps and data ingestion.

mod cache;
mod config;
mod output;
mod run;
mod units;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use lateral_casimir::exec::with_workers;
use lateral_casimir::response::io::read_polarizability;
use lateral_casimir::scenarios::{Cell, Column, Table};
use lateral_casimir::{AtomResponse, Execution, QuadratureSpec};

use crate::output::{config_hash, render, Format, Metadata, Param};
use crate::run::{RunContext, Scenario};

#[derive(Parser, Debug)]
#[command(name = "lateral-casimir", version, about = "Lateral Casimir-Polder sweeps above corrugated surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads for sweeps (1 runs sequentially).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Flat-surface potential U0(z).
    Plane,
    /// Sinusoidal-corrugation amplitude and rho over kz.
    KernelSweep,
    /// rho(k) at fixed height.
    RhoSweep,
    /// Lateral potential, its PFA counterpart and the lateral force along x.
    LateralCurve,
    /// Trap frequency shift above a grooved surface over kz.
    ShiftSweep,
    /// Finite-size condensate correction over the Thomas-Fermi radius.
    BecSweep,
    /// Transform an optical absorption table and cache epsilon(i xi).
    IngestOptical {
        path: PathBuf,
        /// Frequency units of the first column: rad/s or eV.
        #[arg(long)]
        units: Option<String>,
    },
    /// Validate a tabulated polarizability alpha(i xi).
    IngestPolarizability {
        path: PathBuf,
        /// Polarizability units of the second column: SI or au.
        #[arg(long)]
        units: Option<String>,
    },
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn summary_table(columns: &[(&str, &str)], row: Vec<Cell>) -> Table {
    Table {
        columns: columns
            .iter()
            .map(|(n, u)| Column {
                name: n.to_string(),
                unit: u.to_string(),
            })
            .collect(),
        rows: vec![row],
        warnings: Vec::new(),
    }
}

fn source_meta(scenario: &str, path: &Path) -> Result<Metadata> {
    let text = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(Metadata {
        scenario: scenario.to_string(),
        kernel: None,
        params: vec![Param::text("source", path.display().to_string())],
        config_hash: config_hash(&String::from_utf8_lossy(&text)),
    })
}

fn ingest_optical(path: &Path, units: Option<&str>) -> Result<(Table, Metadata)> {
    let (optical, table, cache) = cache::ingest(path, units)?;
    if optical.merged_duplicates() > 0 {
        log::warn!(
            "{}: averaged {} duplicate frequencies",
            path.display(),
            optical.merged_duplicates()
        );
    }
    let samples = table.samples();
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    let mut t = summary_table(
        &[
            ("rows", ""),
            ("merged_duplicates", ""),
            ("xi_min", "rad/s"),
            ("epsilon_at_xi_min", ""),
            ("xi_max", "rad/s"),
            ("epsilon_at_xi_max", ""),
            ("cache", ""),
        ],
        vec![
            Cell::Number(optical.rows().len() as f64),
            Cell::Number(optical.merged_duplicates() as f64),
            Cell::Number(first.0),
            Cell::Number(first.1),
            Cell::Number(last.0),
            Cell::Number(last.1),
            Cell::Text(cache.display().to_string()),
        ],
    );
    if optical.merged_duplicates() > 0 {
        t.warnings
            .push(format!("averaged {} duplicate frequencies", optical.merged_duplicates()));
    }
    Ok((t, source_meta("ingest-optical", path)?))
}

fn ingest_polarizability(path: &Path, units: Option<&str>) -> Result<(Table, Metadata)> {
    let table = read_polarizability(path, units)?;
    let samples = table.samples();
    let last = samples[samples.len() - 1];
    let integral = AtomResponse::tabulated(table.clone(), lateral_casimir::constants::rubidium::MASS)
        .and_then(|a| lateral_casimir::response::alpha_integral(&a, &QuadratureSpec::default()))?;
    let t = summary_table(
        &[
            ("rows", ""),
            ("alpha_static", "C.m2/V"),
            ("xi_max", "rad/s"),
            ("alpha_at_xi_max", "C.m2/V"),
            ("tail_exponent", ""),
            ("alpha_integral", "C.m2/(V.s)"),
        ],
        vec![
            Cell::Number(samples.len() as f64),
            Cell::Number(table.static_value()),
            Cell::Number(last.0),
            Cell::Number(last.1),
            Cell::Number(table.tail_exponent()),
            Cell::Number(integral),
        ],
    );
    Ok((t, source_meta("ingest-polarizability", path)?))
}

fn execute(cli: &Cli) -> Result<()> {
    let scenario = match &cli.command {
        Command::Plane => Scenario::Plane,
        Command::KernelSweep => Scenario::KernelSweep,
        Command::RhoSweep => Scenario::RhoSweep,
        Command::LateralCurve => Scenario::LateralCurve,
        Command::ShiftSweep => Scenario::ShiftSweep,
        Command::BecSweep => Scenario::BecSweep,
        Command::IngestOptical { path, units } => {
            let (table, meta) = ingest_optical(path, units.as_deref())?;
            return emit(&render(&table, &meta, cli.format), cli.output.as_deref());
        }
        Command::IngestPolarizability { path, units } => {
            let (table, meta) = ingest_polarizability(path, units.as_deref())?;
            return emit(&render(&table, &meta, cli.format), cli.output.as_deref());
        }
    };
    let exec = if cli.workers == Some(1) {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let ctx = RunContext::load(cli.config.as_deref(), cli.tolerance, exec)?;
    let (table, meta) = with_workers(cli.workers, || run::run(&ctx, scenario))??;
    for w in &table.warnings {
        log::warn!("{w}");
    }
    emit(&render(&table, &meta, cli.format), cli.output.as_deref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

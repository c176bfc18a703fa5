//! Grid sweeps that produce plot-ready tables.
//!
//! Every sweep evaluates its grid points independently through
//! [`map_grid`](crate::exec::map_grid) and returns rows in grid order.

use std::f64::consts::PI;

use crate::constants::rubidium;
use crate::exec::{try_map_grid, Execution};
use crate::kernel::{rho, ResponseKernel};
use crate::lateral::{pfa_lateral_potential, CorrugationProfile, LateralPotentialField};
use crate::numerics::QuadratureSpec;
use crate::plane::u0_plane;
use crate::response::{AtomResponse, MaterialResponse};
use crate::trap::{detectability, gamma_bec, gamma_from_curvature, gamma_linear_from_curvature, TrapConfiguration};
use crate::{Error, Result};

pub mod defaults {
    /// Corrugation period of the sinusoidal kernel sweep.
    pub const KERNEL_SWEEP_PERIOD: f64 = 10e-6;
    pub const KERNEL_SWEEP_AMPLITUDE: f64 = 10e-9;
    pub const SHIFT_DISTANCE: f64 = 2e-6;
    /// ω_x/2π in Hz.
    pub const TRAP_FREQUENCY_HZ: f64 = 229.0;
    pub const GROOVE_DEPTH: f64 = 250e-9;
    /// Groove width as a fraction of the period.
    pub const GROOVE_WIDTH_FRACTION: f64 = 0.5;
    pub const BEC_DISTANCE: f64 = 2e-6;
    pub const BEC_PERIOD: f64 = 4e-6;
    pub const SENSITIVITIES: [f64; 2] = [1e-5, 1e-4];
    /// Shift sweeps keep harmonics up to n·k·z ≥ this value.
    pub const HARMONIC_REACH: f64 = 40.0;
    pub const MAX_AUTO_HARMONIC: usize = 20_000;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Flag(bool),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    /// Unit symbol, empty for dimensionless columns.
    pub unit: String,
}

fn col(name: &str, unit: &str) -> Column {
    Column {
        name: name.to_string(),
        unit: unit.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    /// Non-fatal diagnostics gathered during the sweep.
    pub warnings: Vec<String>,
}

impl Table {
    fn new(columns: Vec<Column>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Numeric values of a column; non-numeric cells become NaN.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[i] {
                    Cell::Number(v) => v,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }

    fn warn(&mut self, msg: String) {
        if !self.warnings.contains(&msg) {
            self.warnings.push(msg);
        }
    }
}

/// U⁽⁰⁾(z) from the full plane integral.
pub fn plane_sweep(
    atom: &AtomResponse,
    material: &MaterialResponse,
    z_grid: &[f64],
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<Table> {
    let mut table = Table::new(vec![
        col("z", "m"),
        col("U0", "J"),
        col("error_estimate", "J"),
        col("regime", ""),
    ]);
    let results = try_map_grid(exec, z_grid, |&z| u0_plane(atom, material, z, spec))?;
    for (z, r) in z_grid.iter().zip(results) {
        table.rows.push(vec![
            Cell::Number(*z),
            Cell::Number(r.value),
            Cell::Number(r.estimated_error),
            Cell::Text(r.regime.as_str().to_string()),
        ]);
    }
    Ok(table)
}

/// Sinusoidal corrugation of fixed period, atom height varied through kz:
/// columns kz, z, U⁽¹⁾ amplitude h₀g(k, z), ρ.
pub fn kernel_sweep(
    kernel: &ResponseKernel,
    period: f64,
    amplitude: f64,
    kz_grid: &[f64],
    exec: Execution,
) -> Result<Table> {
    let profile = CorrugationProfile::sinusoid(period, amplitude)?;
    let k = profile.wavenumber();
    let mut table = Table::new(vec![
        col("kz", ""),
        col("z", "m"),
        col("U1_amplitude", "J"),
        col("rho", ""),
    ]);
    check_kz(kz_grid)?;
    let rows = try_map_grid(exec, kz_grid, |&kz| {
        let z = kz / k;
        let g = kernel.g(k, z)?;
        Ok((z, amplitude * g, rho(kernel, k, z)?))
    })?;
    for (&kz, (z, u, r)) in kz_grid.iter().zip(rows) {
        if profile.amplitude_warning(z) {
            table.warn(format!("corrugation amplitude is not small against z = {z:e} m"));
        }
        table.rows.push(vec![Cell::Number(kz), Cell::Number(z), Cell::Number(u), Cell::Number(r)]);
    }
    Ok(table)
}

fn check_kz(kz_grid: &[f64]) -> Result<()> {
    match kz_grid.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        Some(v) => Err(Error::domain(format!("kz grid values must be positive, got {v}"))),
        None => Ok(()),
    }
}

/// ρ(k, z) at fixed z over a grid of k (1/m).
pub fn rho_sweep(kernel: &ResponseKernel, z: f64, k_grid: &[f64], exec: Execution) -> Result<Table> {
    let mut table = Table::new(vec![col("k", "1/m"), col("kz", ""), col("g", "N"), col("rho", "")]);
    let rows = try_map_grid(exec, k_grid, |&k| Ok((kernel.g(k, z)?, rho(kernel, k, z)?)))?;
    for (&k, (g, r)) in k_grid.iter().zip(rows) {
        table
            .rows
            .push(vec![Cell::Number(k), Cell::Number(k * z), Cell::Number(g), Cell::Number(r)]);
    }
    Ok(table)
}

/// U⁽¹⁾, its proximity-force counterpart and the lateral force along x.
pub fn lateral_curve(
    profile: &CorrugationProfile,
    kernel: &ResponseKernel,
    z: f64,
    x_grid: &[f64],
    exec: Execution,
) -> Result<Table> {
    let field = LateralPotentialField::with_execution(profile, kernel, z, exec)?;
    let mut table = Table::new(vec![
        col("x", "m"),
        col("U1", "J"),
        col("U1_pfa", "J"),
        col("force", "N"),
    ]);
    if field.amplitude_warning() {
        table.warn(format!("corrugation amplitude is not small against z = {z:e} m"));
    }
    if profile.gibbs_warning() {
        table.warn(format!(
            "{} harmonics do not resolve the groove edges",
            profile.max_harmonic()
        ));
    }
    let rows = try_map_grid(exec, x_grid, |&x| {
        Ok((field.potential(x), pfa_lateral_potential(profile, kernel, x, z)?, field.force(x)))
    })?;
    for (&x, (u, pfa, f)) in x_grid.iter().zip(rows) {
        table
            .rows
            .push(vec![Cell::Number(x), Cell::Number(u), Cell::Number(pfa), Cell::Number(f)]);
    }
    Ok(table)
}

/// Grooved surface whose period follows kz at fixed atom height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrooveFamily {
    pub depth: f64,
    pub width_fraction: f64,
    /// Lower bound on the harmonic cutoff; raised automatically so that
    /// N·kz reaches [`defaults::HARMONIC_REACH`].
    pub min_harmonic: usize,
}

impl Default for GrooveFamily {
    fn default() -> Self {
        Self {
            depth: defaults::GROOVE_DEPTH,
            width_fraction: defaults::GROOVE_WIDTH_FRACTION,
            min_harmonic: crate::lateral::DEFAULT_MAX_HARMONIC,
        }
    }
}

impl GrooveFamily {
    pub fn profile(&self, period: f64, kz: f64) -> Result<CorrugationProfile> {
        if !(self.width_fraction > 0.0 && self.width_fraction < 1.0) {
            return Err(Error::domain(format!(
                "groove width fraction must lie in (0, 1), got {}",
                self.width_fraction
            )));
        }
        let reach = (defaults::HARMONIC_REACH / kz).ceil();
        let n = if reach.is_finite() {
            (reach as usize).clamp(self.min_harmonic.max(1), defaults::MAX_AUTO_HARMONIC.max(self.min_harmonic))
        } else {
            self.min_harmonic
        };
        CorrugationProfile::rectangular(period, self.depth, self.width_fraction * period)?.with_max_harmonic(n)
    }
}

/// The default trap: ω_x/2π = 229 Hz, a ⁸⁷Rb-mass atom at 2 µm.
pub fn default_trap() -> TrapConfiguration {
    TrapConfiguration::point(
        2.0 * PI * defaults::TRAP_FREQUENCY_HZ,
        rubidium::MASS,
        defaults::SHIFT_DISTANCE,
    )
    .expect("default trap is valid")
}

/// γ₀ above the plateau center as the period varies at fixed z_CM.
pub fn shift_sweep(
    kernel: &ResponseKernel,
    family: &GrooveFamily,
    trap: &TrapConfiguration,
    kz_grid: &[f64],
    sensitivities: &[f64],
    exec: Execution,
) -> Result<Table> {
    check_kz(kz_grid)?;
    let mut columns = vec![
        col("kz", ""),
        col("period", "m"),
        col("gamma0", ""),
        col("gamma0_linear", ""),
    ];
    for s in sensitivities {
        detectability(0.0, *s)?;
        columns.push(col(&format!("detectable_{s:.0e}"), ""));
    }
    columns.push(col("harmonics", ""));
    columns.push(col("truncation_remainder", "J"));
    let mut table = Table::new(columns);
    let z = trap.z_cm;
    let rows = try_map_grid(exec, kz_grid, |&kz| {
        let period = 2.0 * PI * z / kz;
        let profile = family.profile(period, kz)?;
        let field = LateralPotentialField::new(&profile, kernel, z)?;
        let curvature = field.curvature(trap.x0);
        Ok((
            period,
            gamma_from_curvature(curvature, trap)?,
            gamma_linear_from_curvature(curvature, trap),
            profile.max_harmonic(),
            field.truncation_remainder(),
            profile.amplitude_warning(z),
        ))
    })?;
    for (&kz, (period, g, gl, n, rem, warn)) in kz_grid.iter().zip(rows) {
        if warn {
            table.warn(format!("groove depth is not small against z = {z:e} m"));
        }
        let mut row = vec![
            Cell::Number(kz),
            Cell::Number(period),
            Cell::Number(g),
            Cell::Number(gl),
        ];
        for s in sensitivities {
            row.push(Cell::Flag(detectability(g, *s)?.detectable));
        }
        row.push(Cell::Number(n as f64));
        row.push(Cell::Number(rem));
        table.rows.push(row);
    }
    Ok(table)
}

/// γ(R)/γ₀ for a condensate of growing Thomas-Fermi radius.
pub fn bec_sweep(
    kernel: &ResponseKernel,
    profile: &CorrugationProfile,
    trap: &TrapConfiguration,
    radii: &[f64],
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<Table> {
    if let Some(r) = radii.iter().find(|r| !(**r >= 0.0 && **r < trap.z_cm)) {
        return Err(Error::domain(format!(
            "Thomas-Fermi radius {r:e} m must lie in [0, z_CM = {:e} m)",
            trap.z_cm
        )));
    }
    let point = trap.with_tf_radius(0.0)?;
    let field = LateralPotentialField::new(profile, kernel, trap.z_cm)?;
    let gamma0 = gamma_from_curvature(field.curvature(trap.x0), &point)?;
    if gamma0 == 0.0 {
        return Err(Error::model("the point-like shift vanishes, γ(R)/γ₀ is undefined"));
    }
    let mut table = Table::new(vec![col("R", "m"), col("gamma", ""), col("gamma0", ""), col("ratio", "")]);
    let values = try_map_grid(exec, radii, |&r| {
        if r == 0.0 {
            return Ok(gamma0);
        }
        gamma_bec(profile, kernel, &trap.with_tf_radius(r)?, spec)
    })?;
    for (&r, g) in radii.iter().zip(values) {
        table.rows.push(vec![
            Cell::Number(r),
            Cell::Number(g),
            Cell::Number(gamma0),
            Cell::Number(g / gamma0),
        ]);
    }
    Ok(table)
}

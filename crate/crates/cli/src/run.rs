//! Resolves a configuration into models and runs one scenario.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use lateral_casimir::constants::{rubidium, C};
use lateral_casimir::kernel::SpecularLimitProvider;
use lateral_casimir::lateral::DEFAULT_MAX_HARMONIC;
use lateral_casimir::response::io::read_polarizability;
use lateral_casimir::response::ImaginaryAxisTable;
use lateral_casimir::scenarios::{self, defaults, GrooveFamily, Table};
use lateral_casimir::{
    AtomResponse, CorrugationProfile, Execution, KernelKind, MaterialResponse, QuadratureSpec, ResponseKernel,
    TrapConfiguration,
};

use crate::cache;
use crate::config::{Config, ConfigError};
use crate::output::{Metadata, Param};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Plane,
    KernelSweep,
    RhoSweep,
    LateralCurve,
    ShiftSweep,
    BecSweep,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Plane => "plane-potential",
            Scenario::KernelSweep => "kernel-sweep",
            Scenario::RhoSweep => "rho-sweep",
            Scenario::LateralCurve => "lateral-curve",
            Scenario::ShiftSweep => "shift-sweep",
            Scenario::BecSweep => "bec-radius-sweep",
        }
    }
}

pub struct RunContext {
    pub config: Config,
    pub config_text: String,
    /// Directory that relative table paths are resolved against.
    pub base_dir: PathBuf,
    pub tolerance: Option<f64>,
    pub exec: Execution,
}

impl RunContext {
    pub fn load(path: Option<&Path>, tolerance: Option<f64>, exec: Execution) -> Result<Self> {
        let (text, base_dir) = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
                let dir = p.parent().map(Path::to_path_buf).unwrap_or_default();
                (text, dir)
            }
            None => (String::new(), PathBuf::from(".")),
        };
        let config = Config::parse(&text).map_err(|e| located(path, e))?;
        if let Some(t) = tolerance {
            if !(t > 0.0 && t < 1.0) {
                bail!("--tolerance must lie in (0, 1), got {t}");
            }
        }
        Ok(Self {
            config,
            config_text: text,
            base_dir,
            tolerance,
            exec,
        })
    }

    fn spec(&self, base: QuadratureSpec) -> QuadratureSpec {
        match self.tolerance {
            Some(t) => base.with_relative_tolerance(t),
            None => base,
        }
    }

    fn path(&self, section: &str, key: &str) -> Option<PathBuf> {
        self.config.text(section, key).map(|p| self.base_dir.join(p))
    }

    fn fail(&self, section: &str, key: &str, message: impl Into<String>) -> anyhow::Error {
        anyhow!(ConfigError {
            line: self.config.line(section, key),
            message: message.into(),
        })
    }

    fn scalar_or(&self, section: &str, key: &str, default: f64) -> Result<f64> {
        Ok(self.config.scalar(section, key)?.unwrap_or(default))
    }

    fn grid_or(&self, key: &str, default: Vec<f64>) -> Vec<f64> {
        self.config.list("grid", key).map(<[f64]>::to_vec).unwrap_or(default)
    }
}

fn located(path: Option<&Path>, e: ConfigError) -> anyhow::Error {
    match path {
        Some(p) => anyhow!("{}: {e}", p.display()),
        None => anyhow!(e),
    }
}

fn lin(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn build_atom(ctx: &RunContext, params: &mut Vec<Param>) -> Result<AtomResponse> {
    let cfg = &ctx.config;
    let model = cfg.text("atom", "model").unwrap_or("rubidium");
    let mass = ctx.scalar_or("atom", "mass", rubidium::MASS)?;
    let alpha0 = cfg.scalar("atom", "alpha0")?;
    let frequency = match (cfg.scalar("atom", "frequency")?, cfg.scalar("atom", "wavelength")?) {
        (Some(_), Some(_)) => {
            return Err(ctx.fail("atom", "wavelength", "give either frequency or wavelength, not both"))
        }
        (Some(w), None) => Some(w),
        (None, Some(l)) => Some(2.0 * std::f64::consts::PI * C / l),
        (None, None) => None,
    };
    params.push(Param::text("atom.model", model));
    let atom = match model {
        "rubidium" => {
            if alpha0.is_some() || frequency.is_some() {
                return Err(ctx.fail("atom", "model", "the rubidium model has fixed parameters; use model = oscillator"));
            }
            AtomResponse::rubidium_standin()
        }
        "oscillator" => {
            let a = alpha0.ok_or_else(|| ctx.fail("atom", "model", "oscillator atoms need alpha0"))?;
            let w = frequency.ok_or_else(|| ctx.fail("atom", "model", "oscillator atoms need frequency or wavelength"))?;
            AtomResponse::single_oscillator(a, w, mass).map_err(|e| ctx.fail("atom", "alpha0", e.to_string()))?
        }
        "static" => {
            let a = alpha0.ok_or_else(|| ctx.fail("atom", "model", "static atoms need alpha0"))?;
            AtomResponse::static_only(a, mass).map_err(|e| ctx.fail("atom", "alpha0", e.to_string()))?
        }
        "table" => {
            let path = ctx
                .path("atom", "table")
                .ok_or_else(|| ctx.fail("atom", "model", "tabulated atoms need `table = <path>`"))?;
            let table = read_polarizability(&path, ctx.config.text("atom", "units"))?;
            params.push(Param::text("atom.table", path.display().to_string()));
            AtomResponse::tabulated(table, mass)?
        }
        other => return Err(ctx.fail("atom", "model", format!("unknown atom model `{other}`"))),
    };
    params.push(Param::number("atom.alpha0", atom.static_polarizability(), "C.m2/V"));
    if let Some(w) = atom.oscillator_frequency() {
        params.push(Param::number("atom.frequency", w, "rad/s"));
    }
    params.push(Param::number("atom.mass", atom.mass(), "kg"));
    Ok(atom)
}

fn build_material(ctx: &RunContext, params: &mut Vec<Param>) -> Result<MaterialResponse> {
    let cfg = &ctx.config;
    let model = cfg.text("material", "model").unwrap_or("perfect");
    params.push(Param::text("material.model", model));
    match model {
        "perfect" => Ok(MaterialResponse::perfect_reflector()),
        "drude" => {
            let wp = cfg
                .scalar("material", "plasma_frequency")?
                .ok_or_else(|| ctx.fail("material", "model", "drude needs plasma_frequency"))?;
            let gamma = cfg
                .scalar("material", "damping")?
                .ok_or_else(|| ctx.fail("material", "model", "drude needs damping"))?;
            params.push(Param::number("material.plasma_frequency", wp, "rad/s"));
            params.push(Param::number("material.damping", gamma, "rad/s"));
            MaterialResponse::drude(wp, gamma).map_err(|e| ctx.fail("material", "plasma_frequency", e.to_string()))
        }
        "table" => {
            let path = ctx
                .path("material", "table")
                .ok_or_else(|| ctx.fail("material", "model", "tabulated materials need `table = <path>`"))?;
            params.push(Param::text("material.table", path.display().to_string()));
            let table: ImaginaryAxisTable = cache::load_or_compute(&path, ctx.config.text("material", "units"))?;
            Ok(MaterialResponse::tabulated(table))
        }
        other => Err(ctx.fail("material", "model", format!("unknown material model `{other}`"))),
    }
}

fn build_kernel(
    ctx: &RunContext,
    default: KernelKind,
    params: &mut Vec<Param>,
) -> Result<(ResponseKernel, (String, String))> {
    let atom = build_atom(ctx, params)?;
    let (kind, source) = match ctx.config.text("kernel", "kind") {
        Some(name) => (
            name.parse::<KernelKind>()
                .map_err(|_| ctx.fail("kernel", "kind", format!("unknown kernel kind `{name}`")))?,
            "config",
        ),
        None => (default, "default"),
    };
    let spec = ctx.spec(QuadratureSpec::default());
    let kernel = match kind {
        KernelKind::PerfectCp => ResponseKernel::perfect_cp(atom),
        KernelKind::PerfectVdw => {
            ResponseKernel::perfect_vdw(atom, &spec).map_err(|e| ctx.fail("kernel", "kind", e.to_string()))?
        }
        KernelKind::PfaSpecular => {
            let material = build_material(ctx, params)?;
            ResponseKernel::pfa_specular(atom, material, spec)
        }
        KernelKind::Custom => {
            let material = build_material(ctx, params)?;
            let provider = ctx.config.text("kernel", "provider").unwrap_or("specular-limit");
            if provider != "specular-limit" {
                return Err(ctx.fail("kernel", "provider", format!("unknown provider `{provider}`")));
            }
            params.push(Param::text("kernel.provider", provider));
            let spec = ctx.spec(QuadratureSpec::default_2d());
            ResponseKernel::custom(atom, material.clone(), Arc::new(SpecularLimitProvider::new(material)), spec)?
        }
    };
    let (kind_name, source) = (kind.as_str().to_string(), source.to_string());
    params.insert(0, Param::text("kernel.kind", kind_name.clone()));
    Ok((kernel, (kind_name, source)))
}

struct ProfileDefaults {
    shape: &'static str,
    period: f64,
    amplitude: f64,
}

fn build_profile(ctx: &RunContext, d: ProfileDefaults, params: &mut Vec<Param>) -> Result<CorrugationProfile> {
    let cfg = &ctx.config;
    let shape = cfg.text("profile", "shape").unwrap_or(d.shape);
    params.push(Param::text("profile.shape", shape));
    let profile = match shape {
        "sinusoid" => {
            let period = ctx.scalar_or("profile", "period", d.period)?;
            let amplitude = ctx.scalar_or("profile", "amplitude", d.amplitude)?;
            params.push(Param::number("profile.period", period, "m"));
            params.push(Param::number("profile.amplitude", amplitude, "m"));
            CorrugationProfile::sinusoid(period, amplitude).map_err(|e| ctx.fail("profile", "shape", e.to_string()))?
        }
        "grooves" => {
            let period = ctx.scalar_or("profile", "period", d.period)?;
            let depth = ctx.scalar_or("profile", "depth", defaults::GROOVE_DEPTH)?;
            let width = groove_width(ctx, period)?;
            params.push(Param::number("profile.period", period, "m"));
            params.push(Param::number("profile.depth", depth, "m"));
            params.push(Param::number("profile.width", width, "m"));
            CorrugationProfile::rectangular(period, depth, width)
                .map_err(|e| ctx.fail("profile", "width", e.to_string()))?
        }
        "table" => {
            let path = ctx
                .path("profile", "table")
                .ok_or_else(|| ctx.fail("profile", "shape", "tabulated profiles need `table = <path>`"))?;
            params.push(Param::text("profile.table", path.display().to_string()));
            let p = CorrugationProfile::read_table(&path)?;
            params.push(Param::number("profile.period", p.period(), "m"));
            p
        }
        other => return Err(ctx.fail("profile", "shape", format!("unknown profile shape `{other}`"))),
    };
    let profile = match cfg.count("profile", "harmonics")? {
        Some(n) => profile
            .with_max_harmonic(n)
            .map_err(|e| ctx.fail("profile", "harmonics", e.to_string()))?,
        None => profile,
    };
    params.push(Param::number("profile.harmonics", profile.max_harmonic() as f64, ""));
    Ok(profile)
}

fn groove_width(ctx: &RunContext, period: f64) -> Result<f64> {
    match (ctx.config.scalar("profile", "width")?, ctx.config.scalar("profile", "width_fraction")?) {
        (Some(_), Some(_)) => Err(ctx.fail("profile", "width_fraction", "give either width or width_fraction")),
        (Some(w), None) => Ok(w),
        (None, Some(f)) => Ok(f * period),
        (None, None) => Ok(defaults::GROOVE_WIDTH_FRACTION * period),
    }
}

fn build_trap(ctx: &RunContext, mass: f64, params: &mut Vec<Param>) -> Result<TrapConfiguration> {
    let omega = ctx.scalar_or("trap", "omega_x", 2.0 * std::f64::consts::PI * defaults::TRAP_FREQUENCY_HZ)?;
    let x0 = ctx.scalar_or("trap", "x0", 0.0)?;
    let z_cm = ctx.scalar_or("trap", "z_cm", defaults::SHIFT_DISTANCE)?;
    let amplitude = ctx.scalar_or("trap", "amplitude", 0.0)?;
    let radius = ctx.scalar_or("trap", "tf_radius", 0.0)?;
    let trap = TrapConfiguration::new(omega, mass, x0, z_cm, amplitude, radius)
        .map_err(|e| ctx.fail("trap", "z_cm", e.to_string()))?;
    params.push(Param::number("trap.omega_x", omega, "rad/s"));
    params.push(Param::number("trap.x0", x0, "m"));
    params.push(Param::number("trap.z_cm", z_cm, "m"));
    params.push(Param::number("trap.amplitude", amplitude, "m"));
    params.push(Param::number("trap.tf_radius", radius, "m"));
    Ok(trap)
}

fn positive_grid(ctx: &RunContext, key: &str, grid: &[f64]) -> Result<()> {
    if let Some(v) = grid.iter().find(|v| v.is_nan() || **v <= 0.0) {
        return Err(ctx.fail("grid", key, format!("`{key}` values must be positive, got {v}")));
    }
    Ok(())
}

fn grid_param(name: &str, grid: &[f64], unit: &'static str, params: &mut Vec<Param>) {
    params.push(Param::number(&format!("{name}.count"), grid.len() as f64, ""));
    if let (Some(first), Some(last)) = (grid.first(), grid.last()) {
        params.push(Param::number(&format!("{name}.first"), *first, unit));
        params.push(Param::number(&format!("{name}.last"), *last, unit));
    }
}

pub fn run(ctx: &RunContext, scenario: Scenario) -> Result<(Table, Metadata)> {
    let mut params = Vec::new();
    let exec = ctx.exec;
    let mut kernel_tag = None;
    let table = match scenario {
        Scenario::Plane => {
            let atom = build_atom(ctx, &mut params)?;
            let material = build_material(ctx, &mut params)?;
            let z = ctx.grid_or("z", log_grid(1e-9, 1e-4, 51));
            positive_grid(ctx, "z", &z)?;
            grid_param("grid.z", &z, "m", &mut params);
            scenarios::plane_sweep(&atom, &material, &z, &ctx.spec(QuadratureSpec::default()), exec)?
        }
        Scenario::KernelSweep => {
            let (kernel, tag) = build_kernel(ctx, KernelKind::PerfectCp, &mut params)?;
            kernel_tag = Some(tag);
            if let Some(shape) = ctx.config.text("profile", "shape") {
                if shape != "sinusoid" {
                    return Err(ctx.fail("profile", "shape", "kernel-sweep uses a sinusoidal profile"));
                }
            }
            let period = ctx.scalar_or("profile", "period", defaults::KERNEL_SWEEP_PERIOD)?;
            let amplitude = ctx.scalar_or("profile", "amplitude", defaults::KERNEL_SWEEP_AMPLITUDE)?;
            params.push(Param::number("profile.period", period, "m"));
            params.push(Param::number("profile.amplitude", amplitude, "m"));
            let kz = ctx.grid_or("kz", lin(0.1, 10.0, 100));
            positive_grid(ctx, "kz", &kz)?;
            grid_param("grid.kz", &kz, "", &mut params);
            scenarios::kernel_sweep(&kernel, period, amplitude, &kz, exec)?
        }
        Scenario::RhoSweep => {
            let (kernel, tag) = build_kernel(ctx, KernelKind::PerfectCp, &mut params)?;
            kernel_tag = Some(tag);
            let z = ctx.scalar_or("sweep", "z", defaults::SHIFT_DISTANCE)?;
            params.push(Param::number("sweep.z", z, "m"));
            let k = match (ctx.config.list("grid", "k"), ctx.config.list("grid", "kz")) {
                (Some(_), Some(_)) => return Err(ctx.fail("grid", "kz", "give either k or kz, not both")),
                (Some(k), None) => k.to_vec(),
                (None, Some(kz)) => kz.iter().map(|v| v / z).collect(),
                (None, None) => lin(0.0, 10.0, 41).into_iter().map(|v| v / z).collect(),
            };
            grid_param("grid.k", &k, "1/m", &mut params);
            scenarios::rho_sweep(&kernel, z, &k, exec)?
        }
        Scenario::LateralCurve => {
            let (kernel, tag) = build_kernel(ctx, KernelKind::PerfectCp, &mut params)?;
            kernel_tag = Some(tag);
            let profile = build_profile(
                ctx,
                ProfileDefaults {
                    shape: "grooves",
                    period: defaults::BEC_PERIOD,
                    amplitude: defaults::KERNEL_SWEEP_AMPLITUDE,
                },
                &mut params,
            )?;
            let z = ctx.scalar_or("sweep", "z", defaults::SHIFT_DISTANCE)?;
            params.push(Param::number("sweep.z", z, "m"));
            let x = ctx.grid_or("x", lin(0.0, profile.period(), 81));
            grid_param("grid.x", &x, "m", &mut params);
            scenarios::lateral_curve(&profile, &kernel, z, &x, exec)?
        }
        Scenario::ShiftSweep => {
            let (kernel, tag) = build_kernel(ctx, KernelKind::PerfectCp, &mut params)?;
            kernel_tag = Some(tag);
            if ctx.config.get("profile", "period").is_some() {
                return Err(ctx.fail("profile", "period", "shift-sweep derives the period from the kz grid"));
            }
            if let Some(shape) = ctx.config.text("profile", "shape") {
                if shape != "grooves" {
                    return Err(ctx.fail("profile", "shape", "shift-sweep uses a grooved profile"));
                }
            }
            if ctx.config.get("profile", "width").is_some() {
                return Err(ctx.fail("profile", "width", "shift-sweep takes width_fraction, not width"));
            }
            let family = GrooveFamily {
                depth: ctx.scalar_or("profile", "depth", defaults::GROOVE_DEPTH)?,
                width_fraction: ctx.scalar_or("profile", "width_fraction", defaults::GROOVE_WIDTH_FRACTION)?,
                min_harmonic: ctx.config.count("profile", "harmonics")?.unwrap_or(DEFAULT_MAX_HARMONIC),
            };
            params.push(Param::text("profile.shape", "grooves"));
            params.push(Param::number("profile.depth", family.depth, "m"));
            params.push(Param::number("profile.width_fraction", family.width_fraction, ""));
            params.push(Param::number("profile.min_harmonics", family.min_harmonic as f64, ""));
            let trap = build_trap(ctx, kernel.atom().mass(), &mut params)?;
            let sens = ctx
                .config
                .list("sweep", "sensitivities")
                .map(<[f64]>::to_vec)
                .unwrap_or_else(|| defaults::SENSITIVITIES.to_vec());
            for s in &sens {
                params.push(Param::number("sweep.sensitivity", *s, ""));
            }
            let kz = ctx.grid_or("kz", lin(0.25, 10.0, 40));
            positive_grid(ctx, "kz", &kz)?;
            grid_param("grid.kz", &kz, "", &mut params);
            scenarios::shift_sweep(&kernel, &family, &trap, &kz, &sens, exec)
                .map_err(|e| ctx.fail("sweep", "sensitivities", e.to_string()))?
        }
        Scenario::BecSweep => {
            let (kernel, tag) = build_kernel(ctx, KernelKind::PerfectCp, &mut params)?;
            kernel_tag = Some(tag);
            let profile = build_profile(
                ctx,
                ProfileDefaults {
                    shape: "grooves",
                    period: defaults::BEC_PERIOD,
                    amplitude: defaults::KERNEL_SWEEP_AMPLITUDE,
                },
                &mut params,
            )?;
            let trap = build_trap(ctx, kernel.atom().mass(), &mut params)?;
            let radii = ctx.grid_or("radius", lin(0.0, 1.5e-6, 16));
            grid_param("grid.radius", &radii, "m", &mut params);
            scenarios::bec_sweep(&kernel, &profile, &trap, &radii, &ctx.spec(QuadratureSpec::default_2d()), exec)
                .map_err(|e| match ctx.config.line("grid", "radius") {
                    Some(_) => ctx.fail("grid", "radius", e.to_string()),
                    None => anyhow!(e),
                })?
        }
    };
    if let Some(t) = ctx.tolerance {
        params.push(Param::number("quadrature.relative_tolerance", t, ""));
    }
    Ok((
        table,
        Metadata {
            scenario: scenario.name().to_string(),
            kernel: kernel_tag,
            params,
            config_hash: crate::output::config_hash(&ctx.config_text),
        },
    ))
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

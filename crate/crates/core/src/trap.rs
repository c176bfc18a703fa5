//! Dipole-oscillation frequency shifts in a harmonic trap.
//!
//! Along x the trap potential ½mω²x² is stiffened by the lateral curvature
//! U″ = ∂²U⁽¹⁾/∂x², so ω_CP = ω√(1 + U″/(mω²)) and
//! γ₀ = ω_CP/ω − 1. A condensate averages γ₀ over its Thomas-Fermi
//! column density (15/6π)(R² − r²)^{3/2}/R⁵ in the x-z plane.

use std::f64::consts::PI;

use crate::exec::Execution;
use crate::kernel::ResponseKernel;
use crate::lateral::{CorrugationProfile, LateralPotentialField};
use crate::numerics::{try_integrate_2d_disk, QuadratureSpec};
use crate::{Error, Result};

/// |U″|/(mω²) below which the shift is considered perturbative.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfiguration {
    /// Trap angular frequency along x, rad/s.
    pub omega_x: f64,
    pub mass: f64,
    pub x0: f64,
    pub z_cm: f64,
    /// Oscillation amplitude δ_x.
    pub amplitude: f64,
    /// Thomas-Fermi radius, 0 for a point-like atom.
    pub tf_radius: f64,
}

impl TrapConfiguration {
    pub fn new(omega_x: f64, mass: f64, x0: f64, z_cm: f64, amplitude: f64, tf_radius: f64) -> Result<Self> {
        let t = Self {
            omega_x,
            mass,
            x0,
            z_cm,
            amplitude,
            tf_radius,
        };
        t.validate()?;
        Ok(t)
    }

    /// A point-like atom at rest above x = 0.
    pub fn point(omega_x: f64, mass: f64, z_cm: f64) -> Result<Self> {
        Self::new(omega_x, mass, 0.0, z_cm, 0.0, 0.0)
    }

    pub fn with_x0(self, x0: f64) -> Result<Self> {
        Self { x0, ..self }.validated()
    }

    pub fn with_z_cm(self, z_cm: f64) -> Result<Self> {
        Self { z_cm, ..self }.validated()
    }

    pub fn with_amplitude(self, amplitude: f64) -> Result<Self> {
        Self { amplitude, ..self }.validated()
    }

    pub fn with_tf_radius(self, tf_radius: f64) -> Result<Self> {
        Self { tf_radius, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(m));
        if !(self.omega_x > 0.0 && self.omega_x.is_finite()) {
            return bad(format!("trap frequency must be positive, got {}", self.omega_x));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return bad(format!("mass must be positive, got {}", self.mass));
        }
        if !self.x0.is_finite() {
            return bad("lateral position must be finite".into());
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return bad(format!("oscillation amplitude must be non-negative, got {}", self.amplitude));
        }
        if !(self.tf_radius >= 0.0 && self.tf_radius.is_finite()) {
            return bad(format!("Thomas-Fermi radius must be non-negative, got {}", self.tf_radius));
        }
        if !(self.z_cm > self.tf_radius && self.z_cm.is_finite()) {
            return bad(format!(
                "the cloud touches the surface: z_CM = {:e} m, R = {:e} m",
                self.z_cm, self.tf_radius
            ));
        }
        Ok(())
    }

    /// m·ω², the bare trap stiffness in N/m.
    pub fn stiffness(&self) -> f64 {
        self.mass * self.omega_x * self.omega_x
    }
}

/// γ₀ = √(1 + U″/(mω²)) − 1 for a given curvature U″ (N/m).
pub fn gamma_from_curvature(curvature: f64, trap: &TrapConfiguration) -> Result<f64> {
    let stiffness = trap.stiffness();
    let total = stiffness + curvature;
    if total <= 0.0 {
        return Err(Error::Instability(total));
    }
    let r = curvature / stiffness;
    // √(1+r) − 1 without cancellation
    Ok(r / ((1.0 + r).sqrt() + 1.0))
}

/// First-order shift U″/(2mω²).
pub fn gamma_linear_from_curvature(curvature: f64, trap: &TrapConfiguration) -> f64 {
    curvature / (2.0 * trap.stiffness())
}

/// ∂²U⁽¹⁾/∂x² at (x₀, z_CM).
pub fn lateral_curvature(profile: &CorrugationProfile, kernel: &ResponseKernel, trap: &TrapConfiguration) -> Result<f64> {
    Ok(LateralPotentialField::new(profile, kernel, trap.z_cm)?.curvature(trap.x0))
}

/// Exact harmonic shift of a point-like atom.
pub fn gamma_single(profile: &CorrugationProfile, kernel: &ResponseKernel, trap: &TrapConfiguration) -> Result<f64> {
    gamma_from_curvature(lateral_curvature(profile, kernel, trap)?, trap)
}

/// First-order harmonic shift of a point-like atom.
pub fn gamma_single_linear(
    profile: &CorrugationProfile,
    kernel: &ResponseKernel,
    trap: &TrapConfiguration,
) -> Result<f64> {
    Ok(gamma_linear_from_curvature(lateral_curvature(profile, kernel, trap)?, trap))
}

/// Normalized Thomas-Fermi column density at distance r from the center.
pub fn thomas_fermi_density(r: f64, radius: f64) -> f64 {
    if r >= radius {
        return 0.0;
    }
    15.0 / (6.0 * PI) * (radius * radius - r * r).powf(1.5) / radius.powi(5)
}

/// γ₀ averaged over the condensate density. Equals [`gamma_single`] when
/// the Thomas-Fermi radius is zero.
pub fn gamma_bec(
    profile: &CorrugationProfile,
    kernel: &ResponseKernel,
    trap: &TrapConfiguration,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let radius = trap.tf_radius;
    if radius == 0.0 {
        return gamma_single(profile, kernel, trap);
    }
    if trap.z_cm - radius <= 0.0 {
        return Err(Error::domain("the condensate touches the surface"));
    }
    let est = try_integrate_2d_disk(
        |x, z| {
            let field = LateralPotentialField::new(profile, kernel, trap.z_cm + z)?;
            let gamma = gamma_from_curvature(field.curvature(trap.x0 + x), trap)?;
            Ok(thomas_fermi_density(x.hypot(z), radius) * gamma)
        },
        radius,
        spec,
    )?;
    Ok(est.value)
}

/// Fractional reduction k²δ²/8 of the shift from finite oscillation amplitude.
pub fn anharmonic_factor(k: f64, amplitude: f64) -> f64 {
    k * k * amplitude * amplitude / 8.0
}

/// Whether kδ < 1, where the anharmonic expansion holds.
pub fn anharmonic_valid(k: f64, amplitude: f64) -> bool {
    k * amplitude < 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detectability {
    pub detectable: bool,
    /// |γ| / sensitivity.
    pub margin: f64,
}

pub fn detectability(gamma: f64, sensitivity: f64) -> Result<Detectability> {
    if !(sensitivity > 0.0 && sensitivity.is_finite()) {
        return Err(Error::domain(format!("sensitivity must be positive, got {sensitivity}")));
    }
    Ok(Detectability {
        detectable: gamma.abs() >= sensitivity,
        margin: gamma.abs() / sensitivity,
    })
}

/// The composed shift γ = γ₀ · (finite-size factor) · (1 − anharmonic factor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftResult {
    pub gamma: f64,
    /// Exact harmonic shift at the cloud center.
    pub gamma_harmonic: f64,
    /// U″/(2mω²) at the cloud center.
    pub gamma_linear: f64,
    /// Density-averaged over point-like shift; `None` when the point-like
    /// shift vanishes.
    pub finite_size_factor: Option<f64>,
    /// γ₀ averaged over the condensate (equal to `gamma_harmonic` for R = 0).
    pub gamma_averaged: f64,
    pub anharmonic_factor: f64,
    /// U″ at the cloud center, N/m.
    pub curvature: f64,
    pub perturbative: bool,
    pub anharmonic_valid: bool,
    pub amplitude_warning: bool,
}

/// Evaluates every component of the shift for one configuration.
pub fn frequency_shift(
    profile: &CorrugationProfile,
    kernel: &ResponseKernel,
    trap: &TrapConfiguration,
    spec: &QuadratureSpec,
) -> Result<ShiftResult> {
    let field = LateralPotentialField::with_execution(profile, kernel, trap.z_cm, Execution::Sequential)?;
    let curvature = field.curvature(trap.x0);
    let gamma_harmonic = gamma_from_curvature(curvature, trap)?;
    let gamma_averaged = if trap.tf_radius > 0.0 {
        gamma_bec(profile, kernel, trap, spec)?
    } else {
        gamma_harmonic
    };
    let finite_size_factor = (gamma_harmonic != 0.0).then(|| gamma_averaged / gamma_harmonic);
    let k = profile.wavenumber();
    let anharmonic = anharmonic_factor(k, trap.amplitude);
    Ok(ShiftResult {
        gamma: gamma_averaged * (1.0 - anharmonic),
        gamma_harmonic,
        gamma_linear: gamma_linear_from_curvature(curvature, trap),
        finite_size_factor,
        gamma_averaged,
        anharmonic_factor: anharmonic,
        curvature,
        perturbative: (curvature / trap.stiffness()).abs() < PERTURBATIVE_LIMIT,
        anharmonic_valid: anharmonic_valid(k, trap.amplitude),
        amplitude_warning: profile.amplitude_warning(trap.z_cm - trap.tf_radius),
    })
}

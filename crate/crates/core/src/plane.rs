//! Casimir-Polder potential U⁽⁰⁾(z) of an atom above a flat surface.
//!
//! The general evaluation is the imaginary-frequency specular-reflection
//! integral with Fresnel amplitudes. In the dimensionless variables
//! ν = 2ξz/c and x = 2κz it reads
//!
//! ```text
//! U⁽⁰⁾ = −ħc/(128π²ε₀z⁴) ∫₀^∞ dν α(iνc/2z) ∫_ν^∞ dx e^{−x} [(2x² − ν²) r_TM − ν² r_TE]
//! ```
//!
//! which reduces to −3ħcα(0)/(32π²ε₀z⁴) for a static atom and a perfect
//! reflector.

use std::f64::consts::PI;

use crate::constants::{C, EPSILON_0, HBAR};
use crate::numerics::{adaptive, adaptive_with_magnitude, try_differentiate, Domain, QuadratureSpec};
use crate::response::{alpha_integral, epsilon_at, AtomResponse, MaterialResponse};
use crate::{Error, Result};

/// Below this multiple of λ_A = c/ω_A the non-retarded asymptote applies.
pub const VDW_REGIME_LIMIT: f64 = 0.01;
/// Above this multiple of λ_A the retarded asymptote applies.
pub const CP_REGIME_LIMIT: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneRegime {
    VdwAsymptote,
    CpAsymptote,
    FullIntegral,
}

impl PlaneRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlaneRegime::VdwAsymptote => "vdW-asymptote",
            PlaneRegime::CpAsymptote => "CP-asymptote",
            PlaneRegime::FullIntegral => "full-integral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePotentialResult {
    /// Energy in J.
    pub value: f64,
    /// Where z sits relative to λ_A (the value itself is always the full integral).
    pub regime: PlaneRegime,
    pub estimated_error: f64,
}

/// Atomic transition length λ_A = c/ω_A, when the atom has a roll-off.
pub fn atomic_wavelength(atom: &AtomResponse) -> Option<f64> {
    atom.characteristic_frequency().map(|w| C / w)
}

/// Regime classification of `z` for this atom.
pub fn classify_regime(atom: &AtomResponse, z: f64) -> PlaneRegime {
    match atomic_wavelength(atom) {
        None => PlaneRegime::CpAsymptote,
        Some(lambda) if z < VDW_REGIME_LIMIT * lambda => PlaneRegime::VdwAsymptote,
        Some(lambda) if z > CP_REGIME_LIMIT * lambda => PlaneRegime::CpAsymptote,
        Some(_) => PlaneRegime::FullIntegral,
    }
}

fn check_distance(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("atom-surface distance must be positive, got {z}")))
    }
}

/// Non-retarded perfect-reflector potential −ħ∫α dξ / (16π²ε₀z³).
pub fn u0_vdw_perfect(atom: &AtomResponse, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_distance(z)?;
    let integral = alpha_integral(atom, spec)?;
    Ok(vdw_from_integral(integral, z))
}

pub(crate) fn vdw_from_integral(alpha_integral: f64, z: f64) -> f64 {
    -HBAR * alpha_integral / (16.0 * PI * PI * EPSILON_0 * z.powi(3))
}

/// Retarded perfect-reflector potential −3ħcα(0)/(32π²ε₀z⁴).
pub fn u0_cp_perfect(atom: &AtomResponse, z: f64) -> Result<f64> {
    check_distance(z)?;
    Ok(cp_from_static(atom.static_polarizability(), z))
}

pub(crate) fn cp_from_static(alpha0: f64, z: f64) -> f64 {
    -3.0 * HBAR * C * alpha0 / (32.0 * PI * PI * EPSILON_0 * z.powi(4))
}

/// Fresnel amplitudes (r_TE, r_TM) at imaginary frequency for dimensionless
/// ν = 2ξz/c and x = 2κz (x ≥ ν), given ε(iξ).
fn fresnel(epsilon: Option<f64>, nu: f64, x: f64) -> (f64, f64) {
    match epsilon {
        None => (-1.0, 1.0),
        Some(eps) => {
            let xm = ((eps - 1.0) * nu * nu + x * x).sqrt();
            ((x - xm) / (x + xm), (eps * x - xm) / (eps * x + xm))
        }
    }
}

/// Full specular-reflection integral for U⁽⁰⁾(z).
pub fn u0_plane(
    atom: &AtomResponse,
    material: &MaterialResponse,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<PlanePotentialResult> {
    check_distance(z)?;
    let perfect = material.is_perfect_reflector();
    let nu_scale = match atom.characteristic_frequency() {
        Some(w) => (2.0 * z * w / C).min(1.0),
        None => 1.0,
    };
    let inner_spec = spec.with_relative_tolerance(spec.relative_tolerance() * 0.01);

    let outer = adaptive_with_magnitude(
        |nu| {
            let xi = nu * C / (2.0 * z);
            let alpha = atom.alpha(xi)?;
            let eps = if perfect { None } else { Some(epsilon_at(material, xi)?) };
            let inner = adaptive(
                |t| {
                    let x = nu + t;
                    let (r_te, r_tm) = fresnel(eps, nu, x);
                    Ok((-t).exp() * ((2.0 * x * x - nu * nu) * r_tm - nu * nu * r_te))
                },
                Domain::SemiInfinite {
                    start: 0.0,
                    scale: 1.0,
                },
                &inner_spec,
            )?;
            let weight = alpha * (-nu).exp();
            Ok((weight * inner.value, weight * inner.magnitude))
        },
        Domain::SemiInfinite {
            start: 0.0,
            scale: nu_scale,
        },
        spec,
    )?;

    let prefactor = -HBAR * C / (128.0 * PI * PI * EPSILON_0 * z.powi(4));
    Ok(PlanePotentialResult {
        value: prefactor * outer.value,
        regime: classify_regime(atom, z),
        estimated_error: (prefactor * outer.error).abs(),
    })
}

/// g(0, z) = −dU⁽⁰⁾/dz from the full plane integral (a force, N).
pub fn pfa_reference(
    atom: &AtomResponse,
    material: &MaterialResponse,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_distance(z)?;
    let tight = spec.with_relative_tolerance(spec.relative_tolerance().min(1e-10));
    let d = try_differentiate(|t| u0_plane(atom, material, t, &tight).map(|r| r.value), z, 0.5 * z)?;
    Ok(-d.value)
}

//! First-order corrugation response g(k, z).
//!
//! A surface profile h(x) = Σ aₙ cos(nkx) shifts the atom's energy by
//! Σ aₙ cos(nkx) g(nk, z) to first order. At k → 0 the response reduces to
//! the flat-surface force g(0, z) = −dU⁽⁰⁾/dz.

mod provider;

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex};

pub use provider::{polarization_contraction, NonspecularProvider, Polarization, SpecularLimitProvider};

use crate::constants::{C, EPSILON_0, HBAR};
use crate::numerics::{adaptive, adaptive_with_magnitude, bessel_k, Domain, QuadratureSpec};
use crate::plane::{self, atomic_wavelength, classify_regime, PlaneRegime};
use crate::response::{alpha_integral, AtomResponse, MaterialResponse};
use crate::{Error, Result};

/// Below this kz the vdW shape function is replaced by its limit G(0) = 12.
pub const VDW_SHAPE_SERIES_LIMIT: f64 = 1e-4;

/// Relative agreement with the flat-surface force a custom provider must
/// reach at k = 0 before it is accepted.
pub const PROVIDER_ACCEPTANCE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    PerfectVdw,
    PerfectCp,
    PfaSpecular,
    Custom,
}

impl KernelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            KernelKind::PerfectVdw => "perfect-vdw",
            KernelKind::PerfectCp => "perfect-cp",
            KernelKind::PfaSpecular => "pfa-specular",
            KernelKind::Custom => "custom-provider",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perfect-vdw" | "vdw" => Ok(KernelKind::PerfectVdw),
            "perfect-cp" | "cp" => Ok(KernelKind::PerfectCp),
            "pfa-specular" | "pfa" => Ok(KernelKind::PfaSpecular),
            "custom-provider" | "custom" => Ok(KernelKind::Custom),
            other => Err(Error::domain(format!("unknown kernel kind `{other}`"))),
        }
    }
}

#[derive(Clone)]
enum Repr {
    PerfectVdw {
        alpha_integral: f64,
    },
    PerfectCp,
    PfaSpecular {
        material: MaterialResponse,
        spec: QuadratureSpec,
    },
    Custom {
        material: MaterialResponse,
        provider: Arc<dyn NonspecularProvider>,
        gate: Option<Arc<Mutex<()>>>,
        spec: QuadratureSpec,
    },
}

/// An immutable, thread-safe evaluator of g(k, z).
#[derive(Clone)]
pub struct ResponseKernel {
    atom: AtomResponse,
    repr: Repr,
}

impl fmt::Debug for ResponseKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("ResponseKernel");
        d.field("kind", &self.kind()).field("atom", &self.atom);
        if let Some(m) = self.material() {
            d.field("material", m);
        }
        if let Repr::Custom { provider, .. } = &self.repr {
            d.field("provider", &provider.name());
        }
        d.finish()
    }
}

impl ResponseKernel {
    /// Non-retarded perfect-reflector kernel. Needs an atom with a
    /// frequency roll-off so that ∫α(iξ)dξ exists.
    pub fn perfect_vdw(atom: AtomResponse, spec: &QuadratureSpec) -> Result<Self> {
        let alpha_integral = alpha_integral(&atom, spec)?;
        Ok(Self {
            atom,
            repr: Repr::PerfectVdw { alpha_integral },
        })
    }

    /// Retarded perfect-reflector kernel; depends on α(0) only.
    pub fn perfect_cp(atom: AtomResponse) -> Self {
        Self {
            atom,
            repr: Repr::PerfectCp,
        }
    }

    /// Proximity-force kernel g(k, z) = g(0, z) for any k, from the full
    /// flat-surface integral.
    pub fn pfa_specular(atom: AtomResponse, material: MaterialResponse, spec: QuadratureSpec) -> Self {
        Self {
            atom,
            repr: Repr::PfaSpecular { material, spec },
        }
    }

    /// Kernel backed by externally supplied nonspecular amplitudes. The
    /// provider is evaluated at k = 0 and rejected unless it reproduces the
    /// flat-surface force within [`PROVIDER_ACCEPTANCE_TOLERANCE`].
    pub fn custom(
        atom: AtomResponse,
        material: MaterialResponse,
        provider: Arc<dyn NonspecularProvider>,
        spec: QuadratureSpec,
    ) -> Result<Self> {
        let kernel = Self::custom_unchecked(atom, material, provider, spec);
        let deviation = kernel.specular_limit_deviation()?;
        if deviation > PROVIDER_ACCEPTANCE_TOLERANCE {
            return Err(Error::Provider(format!(
                "provider `{}` misses the flat-surface force at k = 0 by a relative {deviation:.3e}",
                kernel.provider_name().unwrap_or("custom")
            )));
        }
        Ok(kernel)
    }

    /// As [`custom`](Self::custom) without the acceptance check.
    pub fn custom_unchecked(
        atom: AtomResponse,
        material: MaterialResponse,
        provider: Arc<dyn NonspecularProvider>,
        spec: QuadratureSpec,
    ) -> Self {
        let gate = (!provider.concurrent_safe()).then(|| Arc::new(Mutex::new(())));
        Self {
            atom,
            repr: Repr::Custom {
                material,
                provider,
                gate,
                spec,
            },
        }
    }

    pub fn kind(&self) -> KernelKind {
        match self.repr {
            Repr::PerfectVdw { .. } => KernelKind::PerfectVdw,
            Repr::PerfectCp => KernelKind::PerfectCp,
            Repr::PfaSpecular { .. } => KernelKind::PfaSpecular,
            Repr::Custom { .. } => KernelKind::Custom,
        }
    }

    pub fn atom(&self) -> &AtomResponse {
        &self.atom
    }

    pub fn material(&self) -> Option<&MaterialResponse> {
        match &self.repr {
            Repr::PfaSpecular { material, .. } | Repr::Custom { material, .. } => Some(material),
            _ => None,
        }
    }

    pub fn provider_name(&self) -> Option<&str> {
        match &self.repr {
            Repr::Custom { provider, .. } => Some(provider.name()),
            _ => None,
        }
    }

    /// True when g does not depend on k, as for the proximity-force kernel.
    pub fn is_k_independent(&self) -> bool {
        matches!(self.repr, Repr::PfaSpecular { .. })
    }

    /// g(k, z) in N.
    pub fn g(&self, k: f64, z: f64) -> Result<f64> {
        check_arguments(k, z)?;
        match &self.repr {
            Repr::PerfectVdw { alpha_integral } => Ok(vdw_from_integral(*alpha_integral, k, z)),
            Repr::PerfectCp => Ok(cp_from_static(self.atom.static_polarizability(), k, z)),
            Repr::PfaSpecular { material, spec } => plane::pfa_reference(&self.atom, material, z, spec),
            Repr::Custom { spec, .. } => g_general(self, k, z, spec),
        }
    }

    /// The flat-surface potential consistent with this kernel, so that
    /// g(0, z) = −dU⁽⁰⁾/dz.
    pub fn plane_potential(&self, z: f64) -> Result<f64> {
        check_arguments(0.0, z)?;
        match &self.repr {
            Repr::PerfectVdw { alpha_integral } => Ok(plane::vdw_from_integral(*alpha_integral, z)),
            Repr::PerfectCp => Ok(plane::cp_from_static(self.atom.static_polarizability(), z)),
            Repr::PfaSpecular { material, spec } | Repr::Custom { material, spec, .. } => {
                plane::u0_plane(&self.atom, material, z, spec).map(|r| r.value)
            }
        }
    }

    /// Relative deviation of a custom kernel's g(0, z) from the
    /// flat-surface force, probed at z = λ_A (1 µm for a static atom).
    pub fn specular_limit_deviation(&self) -> Result<f64> {
        let Repr::Custom { material, spec, .. } = &self.repr else {
            return Err(Error::model("only custom kernels carry a provider"));
        };
        let z = atomic_wavelength(&self.atom).unwrap_or(1e-6);
        let reference = plane::pfa_reference(&self.atom, material, z, spec)?;
        let value = g_general(self, 0.0, z, spec)?;
        Ok(((value - reference) / reference).abs())
    }
}

fn check_arguments(k: f64, z: f64) -> Result<()> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(format!("atom-surface distance must be positive, got {z}")));
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::domain(format!("wavevector must be non-negative, got {k}")));
    }
    Ok(())
}

/// G(Z) = Z²[2K₂(Z) + Z K₃(Z)], with G(0) = 12.
pub fn vdw_shape(z: f64) -> f64 {
    if z < VDW_SHAPE_SERIES_LIMIT {
        return 12.0;
    }
    let k2 = bessel_k(2, z).unwrap_or(0.0);
    let k3 = bessel_k(3, z).unwrap_or(0.0);
    z * z * (2.0 * k2 + z * k3)
}

/// F(Z) = e^{−Z}(1 + Z + 16Z²/45 + Z³/45), with F(0) = 1.
pub fn cp_shape(z: f64) -> f64 {
    (-z).exp() * (1.0 + z + 16.0 * z * z / 45.0 + z * z * z / 45.0)
}

fn vdw_from_integral(alpha_integral: f64, k: f64, z: f64) -> f64 {
    -HBAR * vdw_shape(k * z) * alpha_integral / (64.0 * PI * PI * EPSILON_0 * z.powi(4))
}

fn cp_from_static(alpha0: f64, k: f64, z: f64) -> f64 {
    -3.0 * HBAR * C * alpha0 / (8.0 * PI * PI * EPSILON_0 * z.powi(5)) * cp_shape(k * z)
}

/// Non-retarded perfect-reflector kernel −ħG(kz)∫α dξ/(64π²ε₀z⁴).
pub fn g_perfect_vdw(atom: &AtomResponse, k: f64, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_arguments(k, z)?;
    Ok(vdw_from_integral(alpha_integral(atom, spec)?, k, z))
}

/// Retarded perfect-reflector kernel −3ħcα(0)F(kz)/(8π²ε₀z⁵).
pub fn g_perfect_cp(atom: &AtomResponse, k: f64, z: f64) -> Result<f64> {
    check_arguments(k, z)?;
    Ok(cp_from_static(atom.static_polarizability(), k, z))
}

/// Evaluates g(k, z) for a custom kernel from its provider's amplitudes.
///
/// With ν = 2ξz/c and k′ = q/(2z)(cos φ, sin φ), k″ = k′ − k x̂:
///
/// ```text
/// g = ħc/(256π³ε₀z⁵) ∫dν ν² α ∫q dq ∫dφ Σ C_{p′p″} R_{p′p″} e^{−(κ′+κ″)z}/(2κ″)
/// ```
pub fn g_general(kernel: &ResponseKernel, k: f64, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_arguments(k, z)?;
    let Repr::Custom { provider, gate, .. } = &kernel.repr else {
        return Err(Error::model(format!(
            "g_general needs a custom-provider kernel, got {}",
            kernel.kind()
        )));
    };
    let atom = &kernel.atom;
    let provider = provider.as_ref();
    let call = |xi: f64, k1: [f64; 2], k2: [f64; 2], p1: Polarization, p2: Polarization| -> Result<f64> {
        let _guard = gate.as_ref().map(|g| g.lock().unwrap_or_else(|e| e.into_inner()));
        provider.amplitude(xi, k1, k2, p1, p2)
    };

    let nu_scale = match atom.characteristic_frequency() {
        Some(w) => (2.0 * z * w / C).min(1.0),
        None => 1.0,
    };
    let big_k = 2.0 * k * z;
    let q_spec = spec.with_relative_tolerance(spec.relative_tolerance() * 0.1);
    let phi_spec = spec.with_relative_tolerance(spec.relative_tolerance() * 0.01);

    let outer = adaptive_with_magnitude(
        |nu| {
            let xi = nu * C / (2.0 * z);
            let alpha = atom.alpha(xi)?;
            let qv = xi / C;
            let middle = adaptive_with_magnitude(
                |q| {
                    let kp = q / (2.0 * z);
                    let inner = adaptive(
                        |phi| {
                            let (s, c) = phi.sin_cos();
                            let k1 = [kp * c, kp * s];
                            let k2 = [k1[0] - k, k1[1]];
                            let kappa1 = (qv * qv + kp * kp).sqrt();
                            let kappa2 = (qv * qv + k2[0] * k2[0] + k2[1] * k2[1]).sqrt();
                            let weight = (-(kappa1 + kappa2) * z).exp() / (2.0 * kappa2);
                            if weight == 0.0 {
                                return Ok(0.0);
                            }
                            let mut sum = 0.0;
                            for p1 in Polarization::BOTH {
                                for p2 in Polarization::BOTH {
                                    let r = call(xi, k1, k2, p1, p2)?;
                                    if r != 0.0 {
                                        sum += provider.contraction(xi, k1, k2, p1, p2) * r;
                                    }
                                }
                            }
                            let v = sum * weight;
                            if v.is_finite() {
                                Ok(v)
                            } else {
                                Err(Error::Provider(format!("non-finite integrand at ξ = {xi:e}")))
                            }
                        },
                        Domain::Finite {
                            lower: 0.0,
                            upper: 2.0 * PI,
                        },
                        &phi_spec,
                    )?;
                    Ok((q * inner.value, q * inner.magnitude))
                },
                Domain::SemiInfinite {
                    start: 0.0,
                    scale: 1.0 + big_k,
                },
                &q_spec,
            )?;
            let w = nu * nu * alpha;
            Ok((w * middle.value, w * middle.magnitude))
        },
        Domain::SemiInfinite {
            start: 0.0,
            scale: nu_scale,
        },
        spec,
    )?;
    Ok(HBAR * C / (256.0 * PI.powi(3) * EPSILON_0 * z.powi(5)) * outer.value)
}

/// ρ(k, z) = g(k, z)/g(0, z).
pub fn rho(kernel: &ResponseKernel, k: f64, z: f64) -> Result<f64> {
    check_arguments(k, z)?;
    match &kernel.repr {
        Repr::PerfectVdw { .. } => return Ok(vdw_shape(k * z) / 12.0),
        Repr::PerfectCp => return Ok(cp_shape(k * z)),
        Repr::PfaSpecular { .. } => return Ok(1.0),
        Repr::Custom { .. } => {}
    }
    if k == 0.0 {
        return Ok(1.0);
    }
    let g0 = kernel.g(0.0, z)?;
    if g0 == 0.0 {
        return Err(Error::model("g(0, z) vanishes, ρ is undefined"));
    }
    Ok(kernel.g(k, z)? / g0)
}

/// Which closed-form kernel, if any, is appropriate at a given distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeDiagnostic {
    /// λ_A = c/ω_A, absent for a static atom.
    pub atomic_wavelength: Option<f64>,
    pub distance: f64,
    pub regime: PlaneRegime,
    /// `None` in the crossover, where only a custom provider is exact.
    pub recommended: Option<KernelKind>,
}

pub fn regime_diagnostic(atom: &AtomResponse, z: f64) -> Result<RegimeDiagnostic> {
    check_arguments(0.0, z)?;
    let regime = classify_regime(atom, z);
    let recommended = match regime {
        PlaneRegime::VdwAsymptote => Some(KernelKind::PerfectVdw),
        PlaneRegime::CpAsymptote => Some(KernelKind::PerfectCp),
        PlaneRegime::FullIntegral => None,
    };
    Ok(RegimeDiagnostic {
        atomic_wavelength: atomic_wavelength(atom),
        distance: z,
        regime,
        recommended,
    })
}

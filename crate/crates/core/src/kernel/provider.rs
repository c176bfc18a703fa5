//! Interface for first-order nonspecular reflection amplitudes.

use crate::response::{epsilon_at, MaterialResponse};
use crate::{Error, Result};

/// Field polarization relative to the plane of incidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Te,
    Tm,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Te, Polarization::Tm];
}

/// Supplies the first-order nonspecular amplitudes R_{p′p″}(k′, k″) at
/// imaginary frequency ξ, for lateral wavevectors k′ (outgoing, toward the
/// atom) and k″ (incoming), in the conventions of the corrugation response
/// integral: with the default contraction, a uniform displacement h of the
/// surface toward the atom must correspond to R_{pp}(k, k) = 2κ r_p(k) and
/// vanishing cross-polarization terms.
///
/// Implementations must be `Send + Sync`. A provider that wraps
/// non-reentrant code returns `false` from [`concurrent_safe`] and the
/// kernel then serializes its calls.
///
/// [`concurrent_safe`]: NonspecularProvider::concurrent_safe
pub trait NonspecularProvider: Send + Sync {
    fn amplitude(
        &self,
        xi: f64,
        k_out: [f64; 2],
        k_in: [f64; 2],
        p_out: Polarization,
        p_in: Polarization,
    ) -> Result<f64>;

    /// Polarization-vector contraction ε̂⁺_{p′}(k′)·ε̂⁻_{p″}(k″).
    fn contraction(
        &self,
        xi: f64,
        k_out: [f64; 2],
        k_in: [f64; 2],
        p_out: Polarization,
        p_in: Polarization,
    ) -> f64 {
        polarization_contraction(xi, k_out, k_in, p_out, p_in)
    }

    fn concurrent_safe(&self) -> bool {
        true
    }

    fn name(&self) -> &str {
        "custom"
    }
}

fn unit(k: [f64; 2]) -> [f64; 2] {
    let n = k[0].hypot(k[1]);
    if n > 0.0 {
        [k[0] / n, k[1] / n]
    } else {
        [1.0, 0.0]
    }
}

/// Contraction of the imaginary-frequency polarization vectors
/// ε̂_TE = ẑ × k̂ and ε̂^±_TM = (c/ξ)(−i k ẑ ∓ κ k̂), keeping the real
/// product (the i² from the ẑ components is absorbed).
pub fn polarization_contraction(
    xi: f64,
    k_out: [f64; 2],
    k_in: [f64; 2],
    p_out: Polarization,
    p_in: Polarization,
) -> f64 {
    use crate::constants::C;
    let u1 = unit(k_out);
    let u2 = unit(k_in);
    let dot = u1[0] * u2[0] + u1[1] * u2[1];
    let cross = u1[0] * u2[1] - u1[1] * u2[0];
    let q = xi / C;
    let k1 = k_out[0].hypot(k_out[1]);
    let k2 = k_in[0].hypot(k_in[1]);
    let kappa1 = (q * q + k1 * k1).sqrt();
    let kappa2 = (q * q + k2 * k2).sqrt();
    match (p_out, p_in) {
        (Polarization::Te, Polarization::Te) => dot,
        (Polarization::Te, Polarization::Tm) => kappa2 / q * cross,
        (Polarization::Tm, Polarization::Te) => kappa1 / q * cross,
        (Polarization::Tm, Polarization::Tm) => -(k1 * k2 + kappa1 * kappa2 * dot) / (q * q),
    }
}

/// Specular limit of the nonspecular amplitudes: diagonal in polarization,
/// R_{pp}(k′, k″) = 2κ′ r_p(k′) with plane Fresnel amplitudes. It is the
/// reference against which custom providers are checked, and reproduces the
/// flat-surface force at k → 0.
#[derive(Debug, Clone)]
pub struct SpecularLimitProvider {
    material: MaterialResponse,
}

impl SpecularLimitProvider {
    pub fn new(material: MaterialResponse) -> Self {
        Self { material }
    }
}

impl NonspecularProvider for SpecularLimitProvider {
    fn amplitude(
        &self,
        xi: f64,
        k_out: [f64; 2],
        _k_in: [f64; 2],
        p_out: Polarization,
        p_in: Polarization,
    ) -> Result<f64> {
        if p_out != p_in {
            return Ok(0.0);
        }
        let q = xi / crate::constants::C;
        let k = k_out[0].hypot(k_out[1]);
        let kappa = (q * q + k * k).sqrt();
        let r = if self.material.is_perfect_reflector() {
            match p_out {
                Polarization::Te => -1.0,
                Polarization::Tm => 1.0,
            }
        } else {
            let eps = epsilon_at(&self.material, xi)?;
            let kappa_m = ((eps - 1.0) * q * q + kappa * kappa).sqrt();
            match p_out {
                Polarization::Te => (kappa - kappa_m) / (kappa + kappa_m),
                Polarization::Tm => (eps * kappa - kappa_m) / (eps * kappa + kappa_m),
            }
        };
        if !r.is_finite() {
            return Err(Error::Provider(format!("non-finite Fresnel amplitude at ξ = {xi:e}")));
        }
        Ok(2.0 * kappa * r)
    }

    fn name(&self) -> &str {
        "specular-limit"
    }
}

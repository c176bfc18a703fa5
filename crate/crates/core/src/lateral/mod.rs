//! Lateral potential and force above a corrugated surface.
//!
//! To first order in the profile, U⁽¹⁾(x, z) = Σₙ aₙ cos(nkx) g(nk, z).

mod profile;

pub use profile::{
    CorrugationProfile, ProfileShape, AMPLITUDE_WARNING_RATIO, DEFAULT_MAX_HARMONIC, GIBBS_TOLERANCE,
};

use crate::exec::{try_map_grid, Execution};
use crate::kernel::ResponseKernel;
use crate::{Error, Result};

/// One retained harmonic: aₙ (m) and g(nk, z) (N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LateralTerm {
    pub harmonic: usize,
    pub coefficient: f64,
    pub kernel: f64,
}

impl LateralTerm {
    /// aₙ·g(nk, z), an energy.
    pub fn energy(&self) -> f64 {
        self.coefficient * self.kernel
    }
}

/// U⁽¹⁾ at fixed height, ready for evaluation at any x.
///
/// For a k-independent kernel the series collapses to g(0, z)·h(x) and the
/// exact profile is used, so a flat plateau stays exactly flat.
#[derive(Debug, Clone)]
pub struct LateralPotentialField {
    profile: CorrugationProfile,
    z: f64,
    terms: Vec<LateralTerm>,
    uniform_kernel: Option<f64>,
}

impl LateralPotentialField {
    pub fn new(profile: &CorrugationProfile, kernel: &ResponseKernel, z: f64) -> Result<Self> {
        Self::with_execution(profile, kernel, z, Execution::Sequential)
    }

    /// Evaluates the kernel at the retained harmonics with `exec`.
    pub fn with_execution(
        profile: &CorrugationProfile,
        kernel: &ResponseKernel,
        z: f64,
        exec: Execution,
    ) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::domain(format!("atom-surface distance must be positive, got {z}")));
        }
        let k = profile.wavenumber();
        let coeffs = profile.coefficients();
        let scale = coeffs.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
        let retained: Vec<(usize, f64)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.abs() > 1e-14 * scale)
            .map(|(n, &a)| (n, a))
            .collect();

        if kernel.is_k_independent() {
            let g0 = kernel.g(0.0, z)?;
            let terms = retained
                .iter()
                .map(|&(n, a)| LateralTerm {
                    harmonic: n,
                    coefficient: a,
                    kernel: g0,
                })
                .collect();
            return Ok(Self {
                profile: profile.clone(),
                z,
                terms,
                uniform_kernel: Some(g0),
            });
        }

        let terms = try_map_grid(exec, &retained, |&(n, a)| {
            Ok(LateralTerm {
                harmonic: n,
                coefficient: a,
                kernel: kernel.g(n as f64 * k, z)?,
            })
        })?;
        Ok(Self {
            profile: profile.clone(),
            z,
            terms,
            uniform_kernel: None,
        })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn profile(&self) -> &CorrugationProfile {
        &self.profile
    }

    /// Retained harmonics with nonzero aₙ, in increasing n.
    pub fn terms(&self) -> &[LateralTerm] {
        &self.terms
    }

    fn sum(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let k = self.profile.wavenumber();
        self.terms.iter().map(|t| f(t.energy(), t.harmonic as f64 * k)).sum()
    }

    /// U⁽¹⁾(x) in J.
    pub fn potential(&self, x: f64) -> f64 {
        if let Some(g0) = self.uniform_kernel {
            return g0 * self.profile.height(x);
        }
        let x = x.rem_euclid(self.profile.period());
        self.sum(|e, nk| e * (nk * x).cos())
    }

    /// −∂U⁽¹⁾/∂x in N.
    pub fn force(&self, x: f64) -> f64 {
        if let Some(g0) = self.uniform_kernel {
            return -g0 * self.profile.slope(x);
        }
        let x = x.rem_euclid(self.profile.period());
        self.sum(|e, nk| e * nk * (nk * x).sin())
    }

    /// ∂²U⁽¹⁾/∂x² in N/m.
    pub fn curvature(&self, x: f64) -> f64 {
        if let Some(g0) = self.uniform_kernel {
            return g0 * self.profile.curvature(x);
        }
        let x = x.rem_euclid(self.profile.period());
        self.sum(|e, nk| -e * nk * nk * (nk * x).cos())
    }

    /// Magnitude of the last retained term, zero when the representation is
    /// exact (sinusoid or k-independent kernel).
    pub fn truncation_remainder(&self) -> f64 {
        if self.uniform_kernel.is_some() || matches!(self.profile.shape(), ProfileShape::Sinusoid { .. }) {
            return 0.0;
        }
        self.terms.last().map_or(0.0, |t| t.energy().abs())
    }

    /// True when the last retained term is smaller than the first one
    /// beyond n = 0.
    pub fn terms_decay(&self) -> bool {
        let mut oscillating = self.terms.iter().filter(|t| t.harmonic > 0);
        match (oscillating.next(), self.terms.last()) {
            (Some(first), Some(last)) => last.energy().abs() <= first.energy().abs(),
            _ => true,
        }
    }

    pub fn amplitude_warning(&self) -> bool {
        self.profile.amplitude_warning(self.z)
    }
}

/// The cosine coefficients (n, aₙ) for n = 0..N.
pub fn fourier_coefficients(profile: &CorrugationProfile) -> Vec<(usize, f64)> {
    profile.coefficients().iter().copied().enumerate().collect()
}

pub fn lateral_potential(profile: &CorrugationProfile, kernel: &ResponseKernel, x: f64, z: f64) -> Result<f64> {
    Ok(LateralPotentialField::new(profile, kernel, z)?.potential(x))
}

pub fn lateral_force(profile: &CorrugationProfile, kernel: &ResponseKernel, x: f64, z: f64) -> Result<f64> {
    Ok(LateralPotentialField::new(profile, kernel, z)?.force(x))
}

/// Proximity-force estimate U⁽⁰⁾(z − h(x)) − U⁽⁰⁾(z), with U⁽⁰⁾ the
/// flat-surface potential matching `kernel`.
pub fn pfa_lateral_potential(
    profile: &CorrugationProfile,
    kernel: &ResponseKernel,
    x: f64,
    z: f64,
) -> Result<f64> {
    let local = z - profile.height(x);
    if !(local > 0.0) {
        return Err(Error::domain(format!(
            "the surface reaches the atom: z − h(x) = {local:e}"
        )));
    }
    Ok(kernel.plane_potential(local)? - kernel.plane_potential(z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::cp_shape;
    use crate::numerics::differentiate;
    use crate::response::{AtomResponse, MaterialResponse};
    use crate::QuadratureSpec;

    fn cp() -> ResponseKernel {
        ResponseKernel::perfect_cp(AtomResponse::rubidium_standin())
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn sinusoid_closed_form() {
        let p = CorrugationProfile::sinusoid(4e-6, 50e-9).unwrap();
        let kernel = cp();
        let z = 2e-6;
        let g = kernel.g(p.wavenumber(), z).unwrap();
        let f = LateralPotentialField::new(&p, &kernel, z).unwrap();
        assert!(rel(f.potential(0.3e-6), 50e-9 * (p.wavenumber() * 0.3e-6).cos() * g) < 1e-12);
        assert!(f.potential(1e-6).abs() < 1e-12 * (50e-9 * g).abs());
        assert!(rel(f.force(1e-6).abs(), 50e-9 * p.wavenumber() * g.abs()) < 1e-12);
        assert_eq!(f.force(0.0), 0.0);
        assert_eq!(f.truncation_remainder(), 0.0);
    }

    #[test]
    fn force_matches_finite_difference() {
        let p = CorrugationProfile::rectangular(4e-6, 250e-9, 2e-6).unwrap();
        let kernel = cp();
        let f = LateralPotentialField::new(&p, &kernel, 2e-6).unwrap();
        for &x in &[0.3e-6, 0.9e-6, 1.7e-6] {
            let d = differentiate(|t| f.potential(t), x, 0.2e-6);
            assert!(rel(f.force(x), -d) < 1e-5, "x = {x}");
            let c = differentiate(|t| -f.force(t), x, 0.2e-6);
            assert!(rel(f.curvature(x), c) < 1e-5, "x = {x}");
        }
    }

    #[test]
    fn grooves_are_nearly_sinusoidal_far_away() {
        let p = CorrugationProfile::rectangular(4e-6, 250e-9, 2e-6).unwrap();
        let z = 4e-6;
        let f = LateralPotentialField::new(&p, &cp(), z).unwrap();
        let t = f.terms();
        let first = t.iter().find(|t| t.harmonic == 1).unwrap().energy();
        let third = t.iter().find(|t| t.harmonic == 3).unwrap().energy();
        let kz = p.wavenumber() * z;
        let closed_form = cp_shape(3.0 * kz) / (3.0 * cp_shape(kz));
        assert!(rel((third / first).abs(), closed_form) < 1e-10);
        assert!((third / first).abs() < 0.05);
        assert!(f.terms_decay());
    }

    #[test]
    fn linear_in_profile() {
        let kernel = cp();
        let p1 = CorrugationProfile::rectangular(4e-6, 100e-9, 1e-6).unwrap();
        let p2 = CorrugationProfile::rectangular(4e-6, 200e-9, 1e-6).unwrap();
        let u1 = lateral_potential(&p1, &kernel, 0.7e-6, 2e-6).unwrap();
        let u2 = lateral_potential(&p2, &kernel, 0.7e-6, 2e-6).unwrap();
        assert!(rel(u2, 2.0 * u1) < 1e-12);
    }

    #[test]
    fn pfa_kernel_is_flat_on_plateau() {
        let spec = QuadratureSpec::default();
        let kernel = ResponseKernel::pfa_specular(
            AtomResponse::rubidium_standin(),
            MaterialResponse::perfect_reflector(),
            spec,
        );
        let p = CorrugationProfile::rectangular(4e-6, 250e-9, 2e-6).unwrap();
        let f = LateralPotentialField::new(&p, &kernel, 2e-6).unwrap();
        assert_eq!(f.curvature(0.0), 0.0);
        assert_eq!(f.force(0.3e-6), 0.0);
        let u = pfa_lateral_potential(&p, &kernel, 0.0, 2e-6).unwrap();
        assert_eq!(u, 0.0);
    }

    #[test]
    fn pfa_first_order_matches_series_with_g0() {
        let kernel = cp();
        let z = 2e-6;
        let h0 = 1e-3 * z;
        let p = CorrugationProfile::sinusoid(4e-6, h0).unwrap();
        let x = 0.4e-6;
        let g0 = kernel.g(0.0, z).unwrap();
        let expected = h0 * (p.wavenumber() * x).cos() * g0;
        let u = pfa_lateral_potential(&p, &kernel, x, z).unwrap();
        assert!(rel(u, expected) < 1e-2);
    }

    #[test]
    fn beyond_pfa_curvature_on_plateau() {
        let p = CorrugationProfile::rectangular(4e-6, 250e-9, 2e-6).unwrap();
        let kernel = cp();
        for kz in [1.0, 2.0, 4.0, 6.0] {
            let z = kz / p.wavenumber();
            let f = LateralPotentialField::new(&p, &kernel, z).unwrap();
            assert!(f.curvature(0.0).abs() > 0.0, "kz = {kz}");
        }
    }

    #[test]
    fn periodic_and_even() {
        let p = CorrugationProfile::rectangular(4e-6, 250e-9, 1.3e-6).unwrap();
        let f = LateralPotentialField::new(&p, &cp(), 1.5e-6).unwrap();
        for &x in &[0.1e-6, 1.1e-6, 3.3e-6] {
            assert!((f.potential(x + 4e-6) - f.potential(x)).abs() <= 1e-12 * f.potential(x).abs());
            assert!((f.potential(-x) - f.potential(x)).abs() <= 1e-12 * f.potential(x).abs());
        }
    }
}

use crate::numerics::MonotoneCubic;
use crate::response::optical::{kramers_kronig, OpticalDataTable};
use crate::{Error, Result};

/// Imaginary-frequency grid used when transforming optical tables:
/// (ξ_min, ξ_max, points), log-spaced.
pub const DEFAULT_KK_GRID: (f64, f64, usize) = (1e11, 1e18, 200);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaterialKind {
    PerfectReflector,
    Drude,
    Lorentz,
    TabulatedKk,
}

/// One term strength/(ω₀² + ξ² + damping·ξ) of a Lorentz model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzOscillator {
    /// rad²/s²
    pub strength: f64,
    /// rad/s
    pub resonance: f64,
    /// rad/s
    pub damping: f64,
}

/// ε(iξ) sampled on the imaginary axis, interpolated as ln(ε − 1) against
/// ln ξ and extended by power laws outside the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ImaginaryAxisTable {
    samples: Vec<(f64, f64)>,
    interp: MonotoneCubic,
    low_slope: f64,
    high_slope: f64,
    provenance: String,
}

impl ImaginaryAxisTable {
    pub fn new(samples: Vec<(f64, f64)>, provenance: impl Into<String>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::data(None, "imaginary-axis table needs at least two samples"));
        }
        for (i, &(xi, eps)) in samples.iter().enumerate() {
            if !(xi > 0.0 && xi.is_finite()) || !(eps > 1.0 && eps.is_finite()) {
                return Err(Error::data(
                    Some(i + 1),
                    format!("sample needs ξ > 0 and ε(iξ) > 1, got ({xi}, {eps})"),
                ));
            }
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::data(Some(i + 2), "ξ samples must be strictly increasing"));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::data(Some(i + 2), "ε(iξ) must be non-increasing in ξ"));
            }
        }
        let interp = MonotoneCubic::new(
            samples.iter().map(|s| s.0.ln()).collect(),
            samples.iter().map(|s| (s.1 - 1.0).ln()).collect(),
        )?;
        let (low, high) = interp.end_slopes();
        Ok(Self {
            samples,
            interp,
            low_slope: low.min(0.0),
            high_slope: high.min(0.0),
            provenance: provenance.into(),
        })
    }

    /// Kramers-Kronig transform of `table` on a log grid.
    pub fn from_optical(table: &OpticalDataTable, grid: (f64, f64, usize)) -> Result<Self> {
        let (lo, hi, n) = grid;
        if !(lo > 0.0 && hi > lo && n >= 2) {
            return Err(Error::domain("imaginary-axis grid needs 0 < ξ_min < ξ_max and ≥ 2 points"));
        }
        let step = (hi / lo).ln() / (n - 1) as f64;
        let samples = (0..n)
            .map(|i| {
                let xi = if i + 1 == n { hi } else { lo * (step * i as f64).exp() };
                kramers_kronig(table, xi).map(|v| (xi, v.epsilon))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(samples, table.provenance())
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    fn eval(&self, xi: f64) -> f64 {
        let u = xi.ln();
        let (u0, u1) = self.interp.domain();
        let ln_excess = if u < u0 {
            self.interp.eval(u0) + self.low_slope * (u - u0)
        } else if u > u1 {
            self.interp.eval(u1) + self.high_slope * (u - u1)
        } else {
            self.interp.eval(u)
        };
        1.0 + ln_excess.exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Model {
    PerfectReflector,
    Drude { plasma: f64, damping: f64 },
    Lorentz(Vec<LorentzOscillator>),
    Tabulated(ImaginaryAxisTable),
}

/// Permittivity ε(iξ) of the bulk surface.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialResponse {
    model: Model,
}

impl MaterialResponse {
    pub fn perfect_reflector() -> Self {
        Self {
            model: Model::PerfectReflector,
        }
    }

    /// ε(iξ) = 1 + ω_p²/(ξ(ξ + γ)).
    pub fn drude(plasma_frequency: f64, damping: f64) -> Result<Self> {
        if !(plasma_frequency > 0.0 && plasma_frequency.is_finite()) {
            return Err(Error::domain("plasma frequency must be positive"));
        }
        if !(damping >= 0.0 && damping.is_finite()) {
            return Err(Error::domain("Drude damping must be non-negative"));
        }
        Ok(Self {
            model: Model::Drude {
                plasma: plasma_frequency,
                damping,
            },
        })
    }

    pub fn lorentz(oscillators: Vec<LorentzOscillator>) -> Result<Self> {
        if oscillators.is_empty() {
            return Err(Error::domain("Lorentz model needs at least one oscillator"));
        }
        for o in &oscillators {
            if !(o.strength > 0.0 && o.resonance > 0.0 && o.damping >= 0.0)
                || !(o.strength.is_finite() && o.resonance.is_finite() && o.damping.is_finite())
            {
                return Err(Error::domain(format!("invalid Lorentz oscillator {o:?}")));
            }
        }
        Ok(Self {
            model: Model::Lorentz(oscillators),
        })
    }

    pub fn tabulated(table: ImaginaryAxisTable) -> Self {
        Self {
            model: Model::Tabulated(table),
        }
    }

    /// Transform real-axis absorption data onto the default imaginary grid.
    pub fn from_optical_table(table: &OpticalDataTable) -> Result<Self> {
        Ok(Self::tabulated(ImaginaryAxisTable::from_optical(table, DEFAULT_KK_GRID)?))
    }

    pub fn kind(&self) -> MaterialKind {
        match self.model {
            Model::PerfectReflector => MaterialKind::PerfectReflector,
            Model::Drude { .. } => MaterialKind::Drude,
            Model::Lorentz(_) => MaterialKind::Lorentz,
            Model::Tabulated(_) => MaterialKind::TabulatedKk,
        }
    }

    pub fn is_perfect_reflector(&self) -> bool {
        self.kind() == MaterialKind::PerfectReflector
    }

    pub fn drude_parameters(&self) -> Option<(f64, f64)> {
        match self.model {
            Model::Drude { plasma, damping } => Some((plasma, damping)),
            _ => None,
        }
    }

    pub fn lorentz_oscillators(&self) -> Option<&[LorentzOscillator]> {
        match &self.model {
            Model::Lorentz(o) => Some(o),
            _ => None,
        }
    }

    pub fn imaginary_axis_table(&self) -> Option<&ImaginaryAxisTable> {
        match &self.model {
            Model::Tabulated(t) => Some(t),
            _ => None,
        }
    }

    pub fn epsilon(&self, xi: f64) -> Result<f64> {
        epsilon_at(self, xi)
    }
}

/// ε(iξ) for ξ > 0. Undefined for a perfect reflector.
pub fn epsilon_at(material: &MaterialResponse, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::domain(format!("ε(iξ) needs ξ > 0, got {xi}")));
    }
    match &material.model {
        Model::PerfectReflector => Err(Error::model(
            "a perfect reflector has no finite permittivity",
        )),
        Model::Drude { plasma, damping } => Ok(1.0 + plasma * plasma / (xi * (xi + damping))),
        Model::Lorentz(osc) => Ok(1.0
            + osc
                .iter()
                .map(|o| o.strength / (o.resonance * o.resonance + xi * xi + o.damping * xi))
                .sum::<f64>()),
        Model::Tabulated(t) => Ok(t.eval(xi)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drude_limits() {
        let m = MaterialResponse::drude(1.37e16, 5.32e13).unwrap();
        assert!((epsilon_at(&m, 1e30).unwrap() - 1.0).abs() < 1e-20);
        let lossless = MaterialResponse::drude(2e15, 0.0).unwrap();
        assert!((epsilon_at(&lossless, 2e15).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lorentz_static_limit() {
        let o = LorentzOscillator {
            strength: 4e30,
            resonance: 2e15,
            damping: 1e13,
        };
        let m = MaterialResponse::lorentz(vec![o]).unwrap();
        let v = epsilon_at(&m, 1e-3).unwrap();
        assert!((v - (1.0 + 4e30 / 4e30)).abs() < 1e-12);
    }

    #[test]
    fn perfect_reflector_has_no_epsilon() {
        let m = MaterialResponse::perfect_reflector();
        assert!(matches!(epsilon_at(&m, 1e15), Err(Error::Model(_))));
    }

    #[test]
    fn tabulated_interpolates_and_extrapolates() {
        let drude = MaterialResponse::drude(1e16, 1e14).unwrap();
        let samples: Vec<_> = (0..40)
            .map(|i| {
                let xi = 1e12 * 10f64.powf(i as f64 * 0.15);
                (xi, epsilon_at(&drude, xi).unwrap())
            })
            .collect();
        let t = MaterialResponse::tabulated(ImaginaryAxisTable::new(samples.clone(), "s").unwrap());
        for &(xi, e) in &samples {
            assert!((epsilon_at(&t, xi).unwrap() / e - 1.0).abs() < 1e-12);
        }
        let mid = 3.3e14;
        assert!((epsilon_at(&t, mid).unwrap() / epsilon_at(&drude, mid).unwrap() - 1.0).abs() < 1e-3);
        // power-law continuation stays above 1 and monotone
        let far = epsilon_at(&t, 1e22).unwrap();
        assert!(far > 1.0 && far < epsilon_at(&t, 1e20).unwrap());
        assert!(epsilon_at(&t, 1e9).unwrap() > epsilon_at(&t, 1e12).unwrap());
    }

    #[test]
    fn invalid_parameters() {
        assert!(MaterialResponse::drude(0.0, 1.0).is_err());
        assert!(MaterialResponse::drude(1.0, -1.0).is_err());
        assert!(MaterialResponse::lorentz(vec![]).is_err());
        assert!(ImaginaryAxisTable::new(vec![(1.0, 0.5), (2.0, 0.4)], "x").is_err());
        assert!(ImaginaryAxisTable::new(vec![(1.0, 2.0), (2.0, 3.0)], "x").is_err());
    }
}

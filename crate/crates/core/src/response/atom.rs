use crate::constants::rubidium;
use crate::numerics::{adaptive, Domain, MonotoneCubic, QuadratureSpec};
use crate::{Error, Result};

/// Default high-frequency decay exponent of tabulated polarizabilities.
pub const DEFAULT_POLARIZABILITY_TAIL: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    StaticOnly,
    SingleOscillator,
    Tabulated,
}

/// Sampled α(iξ) with log-log monotone cubic interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPolarizability {
    samples: Vec<(f64, f64)>,
    /// α(iξ) ∝ ξ^(−tail_exponent) above the last sample.
    tail_exponent: f64,
    interp: Option<MonotoneCubic>,
    provenance: String,
}

impl TabulatedPolarizability {
    /// Samples must be strictly increasing in ξ ≥ 0, with α positive and
    /// non-increasing.
    pub fn new(samples: Vec<(f64, f64)>, provenance: impl Into<String>) -> Result<Self> {
        Self::with_tail_exponent(samples, DEFAULT_POLARIZABILITY_TAIL, provenance)
    }

    pub fn with_tail_exponent(
        samples: Vec<(f64, f64)>,
        tail_exponent: f64,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::data(None, "polarizability table is empty"));
        }
        if !(tail_exponent > 1.0) {
            return Err(Error::data(
                None,
                format!("polarizability tail exponent must exceed 1, got {tail_exponent}"),
            ));
        }
        for (i, &(xi, a)) in samples.iter().enumerate() {
            if !(xi >= 0.0 && xi.is_finite()) || !(a > 0.0 && a.is_finite()) {
                return Err(Error::data(
                    Some(i + 1),
                    format!("sample {i} needs ξ ≥ 0 and α > 0 (got {xi}, {a})"),
                ));
            }
        }
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::data(Some(i + 2), "ξ samples must be strictly increasing"));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::data(Some(i + 2), "α(iξ) must be non-increasing in ξ"));
            }
        }
        let positive: Vec<(f64, f64)> = samples.iter().copied().filter(|s| s.0 > 0.0).collect();
        let interp = if positive.len() >= 2 {
            Some(MonotoneCubic::new(
                positive.iter().map(|s| s.0.ln()).collect(),
                positive.iter().map(|s| s.1.ln()).collect(),
            )?)
        } else {
            None
        };
        Ok(Self {
            samples,
            tail_exponent,
            interp,
            provenance: provenance.into(),
        })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// α(0): the ξ = 0 sample if present, else the first sample (constant
    /// continuation below the table).
    pub fn static_value(&self) -> f64 {
        self.samples[0].1
    }

    fn first_positive(&self) -> (f64, f64) {
        *self
            .samples
            .iter()
            .find(|s| s.0 > 0.0)
            .unwrap_or(&self.samples[0])
    }

    fn eval(&self, xi: f64) -> f64 {
        let (x0, a0) = self.samples[0];
        let (xp, ap) = self.first_positive();
        let (xl, al) = self.samples[self.samples.len() - 1];
        if xi >= xl {
            if xl == 0.0 {
                return al;
            }
            return al * (xi / xl).powf(-self.tail_exponent);
        }
        if xi <= xp {
            if x0 == 0.0 && xp > 0.0 {
                // quadratic approach to α(0), as for a damped oscillator
                let s = xi / xp;
                return a0 + (ap - a0) * s * s;
            }
            return ap;
        }
        match &self.interp {
            Some(p) => {
                if let Ok(i) = self.samples.binary_search_by(|s| s.0.total_cmp(&xi)) {
                    return self.samples[i].1;
                }
                p.eval(xi.ln()).exp()
            }
            None => ap,
        }
    }

    /// ξ at which α first drops to half of α(0).
    fn half_frequency(&self) -> f64 {
        let half = 0.5 * self.static_value();
        let mut lo = self.first_positive().0.max(f64::MIN_POSITIVE);
        let last = self.samples[self.samples.len() - 1].0;
        if self.eval(last) > half {
            let ratio = (self.eval(last) / half).powf(1.0 / self.tail_exponent);
            return last * ratio;
        }
        let mut hi = last;
        if self.eval(lo) <= half {
            return lo;
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if self.eval(mid) > half {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi / lo < 1.0 + 1e-12 {
                break;
            }
        }
        hi
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Model {
    StaticOnly,
    SingleOscillator { frequency: f64 },
    Tabulated(TabulatedPolarizability),
}

/// Dynamic polarizability α(iξ) of a spherically symmetric ground-state atom.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomResponse {
    static_polarizability: f64,
    mass: f64,
    model: Model,
}

impl AtomResponse {
    pub fn static_only(static_polarizability: f64, mass: f64) -> Result<Self> {
        check_static(static_polarizability)?;
        check_mass(mass)?;
        Ok(Self {
            static_polarizability,
            mass,
            model: Model::StaticOnly,
        })
    }

    /// α(iξ) = α(0) / (1 + ξ²/ω_A²).
    pub fn single_oscillator(static_polarizability: f64, frequency: f64, mass: f64) -> Result<Self> {
        check_static(static_polarizability)?;
        check_mass(mass)?;
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::domain(format!(
                "oscillator frequency must be positive, got {frequency}"
            )));
        }
        Ok(Self {
            static_polarizability,
            mass,
            model: Model::SingleOscillator { frequency },
        })
    }

    pub fn tabulated(table: TabulatedPolarizability, mass: f64) -> Result<Self> {
        check_mass(mass)?;
        Ok(Self {
            static_polarizability: table.static_value(),
            mass,
            model: Model::Tabulated(table),
        })
    }

    /// Single-oscillator rubidium stand-in (see [`crate::constants::rubidium`]).
    pub fn rubidium_standin() -> Self {
        Self::single_oscillator(
            rubidium::STATIC_POLARIZABILITY,
            rubidium::OSCILLATOR_FREQUENCY,
            rubidium::MASS,
        )
        .expect("stand-in parameters are valid")
    }

    pub fn kind(&self) -> AtomKind {
        match self.model {
            Model::StaticOnly => AtomKind::StaticOnly,
            Model::SingleOscillator { .. } => AtomKind::SingleOscillator,
            Model::Tabulated(_) => AtomKind::Tabulated,
        }
    }

    pub fn static_polarizability(&self) -> f64 {
        self.static_polarizability
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn oscillator_frequency(&self) -> Option<f64> {
        match self.model {
            Model::SingleOscillator { frequency } => Some(frequency),
            _ => None,
        }
    }

    pub fn table(&self) -> Option<&TabulatedPolarizability> {
        match &self.model {
            Model::Tabulated(t) => Some(t),
            _ => None,
        }
    }

    /// Frequency at which the response rolls off: ω_A, or the half-value
    /// point of a table. `None` for a static-only atom.
    pub fn characteristic_frequency(&self) -> Option<f64> {
        match &self.model {
            Model::StaticOnly => None,
            Model::SingleOscillator { frequency } => Some(*frequency),
            Model::Tabulated(t) => Some(t.half_frequency()),
        }
    }

    /// Same atom with α multiplied by `factor` at every frequency.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0 && factor.is_finite()) {
            return Err(Error::domain("polarizability scale factor must be non-negative"));
        }
        let model = match &self.model {
            Model::Tabulated(t) => {
                if factor == 0.0 {
                    return Err(Error::domain("cannot scale a tabulated polarizability to zero"));
                }
                Model::Tabulated(TabulatedPolarizability::with_tail_exponent(
                    t.samples.iter().map(|&(x, a)| (x, a * factor)).collect(),
                    t.tail_exponent,
                    t.provenance.clone(),
                )?)
            }
            m => m.clone(),
        };
        Ok(Self {
            static_polarizability: self.static_polarizability * factor,
            mass: self.mass,
            model,
        })
    }

    /// α(iξ) in C·m²/V.
    pub fn alpha(&self, xi: f64) -> Result<f64> {
        alpha_at(self, xi)
    }

    fn alpha_unchecked(&self, xi: f64) -> f64 {
        match &self.model {
            Model::StaticOnly => self.static_polarizability,
            Model::SingleOscillator { frequency } => {
                let r = xi / frequency;
                self.static_polarizability / (1.0 + r * r)
            }
            Model::Tabulated(t) => t.eval(xi),
        }
    }
}

fn check_static(alpha0: f64) -> Result<()> {
    if alpha0 >= 0.0 && alpha0.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "static polarizability must be non-negative, got {alpha0}"
        )))
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("atom mass must be positive, got {mass}")))
    }
}

/// α(iξ) for ξ ≥ 0.
pub fn alpha_at(atom: &AtomResponse, xi: f64) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::domain(format!(
            "imaginary frequency must be non-negative, got {xi}"
        )));
    }
    Ok(atom.alpha_unchecked(xi))
}

/// ∫₀^∞ α(iξ) dξ.
pub fn alpha_integral(atom: &AtomResponse, spec: &QuadratureSpec) -> Result<f64> {
    match &atom.model {
        Model::StaticOnly => Err(Error::model(
            "the frequency integral of a static-only polarizability diverges",
        )),
        Model::SingleOscillator { frequency } => adaptive(
            |xi| Ok(atom.alpha_unchecked(xi)),
            Domain::SemiInfinite {
                start: 0.0,
                scale: *frequency,
            },
            spec,
        )
        .map(|e| e.value),
        Model::Tabulated(t) => {
            let mut knots: Vec<f64> = t.samples.iter().map(|s| s.0).collect();
            if knots[0] > 0.0 {
                knots.insert(0, 0.0);
            }
            let mut total = 0.0;
            for w in knots.windows(2) {
                total += adaptive(
                    |xi| Ok(t.eval(xi)),
                    Domain::Finite {
                        lower: w[0],
                        upper: w[1],
                    },
                    spec,
                )?
                .value;
            }
            let (xl, al) = t.samples[t.samples.len() - 1];
            total += al * xl / (t.tail_exponent - 1.0);
            Ok(total)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn oscillator() -> AtomResponse {
        AtomResponse::single_oscillator(5.25e-39, 2.4e15, 1.44e-25).unwrap()
    }

    #[test]
    fn single_oscillator_values() {
        let a = oscillator();
        assert_eq!(alpha_at(&a, 0.0).unwrap(), 5.25e-39);
        assert!((alpha_at(&a, 2.4e15).unwrap() - 5.25e-39 / 2.0).abs() < 1e-52);
        assert!(matches!(alpha_at(&a, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn single_oscillator_integral() {
        let a = oscillator();
        let v = alpha_integral(&a, &QuadratureSpec::default()).unwrap();
        let exact = 5.25e-39 * 2.4e15 * PI / 2.0;
        assert!((v / exact - 1.0).abs() < 1e-6);
    }

    #[test]
    fn static_only_integral_is_model_error() {
        let a = AtomResponse::static_only(1e-39, 1e-25).unwrap();
        assert!(matches!(
            alpha_integral(&a, &QuadratureSpec::default()),
            Err(Error::Model(_))
        ));
        assert_eq!(alpha_at(&a, 1e20).unwrap(), 1e-39);
    }

    fn sampled_oscillator(points_per_decade: usize) -> AtomResponse {
        let osc = oscillator();
        let mut samples = vec![(0.0, osc.static_polarizability())];
        let n = 8 * points_per_decade;
        for i in 0..=n {
            let xi = 1e12 * 10f64.powf(i as f64 / points_per_decade as f64);
            samples.push((xi, alpha_at(&osc, xi).unwrap()));
        }
        AtomResponse::tabulated(TabulatedPolarizability::new(samples, "test").unwrap(), osc.mass()).unwrap()
    }

    #[test]
    fn tabulated_hits_samples_exactly() {
        let t = sampled_oscillator(10);
        for &(xi, a) in t.table().unwrap().samples() {
            assert_eq!(alpha_at(&t, xi).unwrap(), a);
        }
    }

    #[test]
    fn tabulated_integral_matches_closed_form() {
        let t = sampled_oscillator(10);
        let v = alpha_integral(&t, &QuadratureSpec::default()).unwrap();
        let exact = 5.25e-39 * 2.4e15 * PI / 2.0;
        assert!((v / exact - 1.0).abs() < 1e-3, "{}", v / exact);
    }

    #[test]
    fn integral_is_linear_in_scale() {
        let spec = QuadratureSpec::default();
        for atom in [oscillator(), sampled_oscillator(5)] {
            let base = alpha_integral(&atom, &spec).unwrap();
            let scaled = alpha_integral(&atom.scaled(3.5).unwrap(), &spec).unwrap();
            assert!((scaled / base - 3.5).abs() < 1e-9);
        }
    }

    #[test]
    fn table_validation() {
        assert!(TabulatedPolarizability::new(vec![], "x").is_err());
        assert!(TabulatedPolarizability::new(vec![(1.0, 2.0), (1.0, 1.0)], "x").is_err());
        assert!(TabulatedPolarizability::new(vec![(1.0, 1.0), (2.0, 2.0)], "x").is_err());
        assert!(TabulatedPolarizability::new(vec![(1.0, -1.0)], "x").is_err());
        assert!(TabulatedPolarizability::with_tail_exponent(vec![(1.0, 1.0)], 1.0, "x").is_err());
    }

    #[test]
    fn characteristic_frequency_of_sampled_oscillator() {
        let t = sampled_oscillator(20);
        let w = t.characteristic_frequency().unwrap();
        assert!((w / 2.4e15 - 1.0).abs() < 1e-3);
        assert!(AtomResponse::static_only(1.0, 1.0).unwrap().characteristic_frequency().is_none());
    }
}

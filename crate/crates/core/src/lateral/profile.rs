use std::f64::consts::PI;
use std::path::Path;

use crate::response::io::{parse_columns, read};
use crate::{Error, Result};

/// Harmonic cutoff used unless overridden.
pub const DEFAULT_MAX_HARMONIC: usize = 101;

/// max|h|/z at or above which first-order perturbation theory is flagged.
pub const AMPLITUDE_WARNING_RATIO: f64 = 0.25;

/// Relative resynthesis error of a truncated groove series, at the plateau
/// and groove centers, above which the cutoff is flagged as too low.
pub const GIBBS_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileShape {
    /// h(x) = amplitude·cos(kx).
    Sinusoid { amplitude: f64 },
    /// h = 0 on a plateau centered at x = 0 and h = −depth inside a groove
    /// of the given width centered at x = λ/2.
    RectangularGrooves { depth: f64, width: f64 },
    /// Heights at x_j = jλ/M, j = 0..M, even about x = 0.
    Tabulated { samples: Vec<f64> },
}

/// A periodic, even surface profile h(x) = Σ aₙ cos(nkx), k = 2π/λ.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrugationProfile {
    period: f64,
    shape: ProfileShape,
    max_harmonic: usize,
    coefficients: Vec<f64>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

impl CorrugationProfile {
    pub fn sinusoid(period: f64, amplitude: f64) -> Result<Self> {
        positive("corrugation period", period)?;
        positive("corrugation amplitude", amplitude)?;
        Ok(Self::assemble(period, ProfileShape::Sinusoid { amplitude }, DEFAULT_MAX_HARMONIC))
    }

    pub fn rectangular(period: f64, depth: f64, width: f64) -> Result<Self> {
        positive("corrugation period", period)?;
        positive("groove depth", depth)?;
        if !(width > 0.0 && width < period) {
            return Err(Error::domain(format!(
                "groove width must lie strictly inside (0, {period:e}), got {width:e}"
            )));
        }
        Ok(Self::assemble(
            period,
            ProfileShape::RectangularGrooves { depth, width },
            DEFAULT_MAX_HARMONIC,
        ))
    }

    /// Uniform samples over one period starting at x = 0. The profile must
    /// be even: h_j = h_{M−j}.
    pub fn tabulated(period: f64, samples: Vec<f64>) -> Result<Self> {
        positive("corrugation period", period)?;
        let m = samples.len();
        if m < 3 {
            return Err(Error::data(None, "a tabulated profile needs at least 3 samples"));
        }
        if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::data(None, format!("non-finite profile height {bad}")));
        }
        let scale = samples.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        for j in 1..m {
            if (samples[j] - samples[m - j]).abs() > 1e-9 * scale {
                return Err(Error::data(
                    None,
                    format!("profile is not even about x = 0: h[{j}] ≠ h[{}]", m - j),
                ));
            }
        }
        let max_harmonic = m / 2;
        Ok(Self::assemble(period, ProfileShape::Tabulated { samples }, max_harmonic))
    }

    /// Two-column text (x and h in meters, `#` comments). The x values must
    /// be uniformly spaced from 0; a final row at x = λ repeating the first
    /// height is accepted and dropped.
    pub fn parse_table(text: &str) -> Result<Self> {
        let file = parse_columns(text)?;
        match file.units.as_deref() {
            None | Some("m") => {}
            Some(other) => {
                return Err(Error::data(None, format!("profile tables are in meters, got units '{other}'")))
            }
        }
        let rows = file.rows;
        if rows.len() < 3 {
            return Err(Error::data(None, "a tabulated profile needs at least 3 rows"));
        }
        if rows[0].1 != 0.0 {
            return Err(Error::data(Some(rows[0].0), "the first sample must sit at x = 0"));
        }
        let dx = rows[1].1 - rows[0].1;
        if !(dx > 0.0) {
            return Err(Error::data(Some(rows[1].0), "x must increase"));
        }
        for (j, &(line, x, _)) in rows.iter().enumerate() {
            if ((x - j as f64 * dx) / dx).abs() > 1e-6 {
                return Err(Error::data(Some(line), format!("x = {x:e} breaks the uniform spacing {dx:e}")));
            }
        }
        let mut heights: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let last = *heights.last().unwrap_or(&0.0);
        let scale = heights.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        // a closing row at x = λ duplicates x = 0 for an even table
        let m = heights.len();
        let closes = (last - heights[0]).abs() <= 1e-9 * scale
            && (1..m - 1).all(|j| (heights[j] - heights[m - 1 - j]).abs() <= 1e-9 * scale);
        if closes {
            heights.pop();
        }
        let period = heights.len() as f64 * dx;
        Self::tabulated(period, heights)
    }

    pub fn read_table(path: &Path) -> Result<Self> {
        Self::parse_table(&read(path)?)
    }

    fn assemble(period: f64, shape: ProfileShape, max_harmonic: usize) -> Self {
        let mut p = Self {
            period,
            shape,
            max_harmonic,
            coefficients: Vec::new(),
        };
        p.coefficients = p.compute_coefficients();
        p
    }

    /// Sets the cutoff N. For tabulated profiles N is capped at M/2.
    pub fn with_max_harmonic(self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("harmonic cutoff must be at least 1"));
        }
        let n = match &self.shape {
            ProfileShape::Tabulated { samples } => n.min(samples.len() / 2),
            _ => n,
        };
        Ok(Self::assemble(self.period, self.shape, n))
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn max_harmonic(&self) -> usize {
        self.max_harmonic
    }

    pub fn kind_name(&self) -> &'static str {
        match self.shape {
            ProfileShape::Sinusoid { .. } => "sinusoid",
            ProfileShape::RectangularGrooves { .. } => "rectangular-grooves",
            ProfileShape::Tabulated { .. } => "tabulated-even",
        }
    }

    /// a₀..a_N in meters, index = harmonic.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    fn compute_coefficients(&self) -> Vec<f64> {
        match &self.shape {
            ProfileShape::Sinusoid { amplitude } => vec![0.0, *amplitude],
            ProfileShape::RectangularGrooves { depth, width } => {
                let duty = width / self.period;
                let mut a = Vec::with_capacity(self.max_harmonic + 1);
                a.push(-depth * duty);
                for n in 1..=self.max_harmonic {
                    let nf = n as f64;
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    a.push(-2.0 * depth / (nf * PI) * sign * (nf * PI * duty).sin());
                }
                a
            }
            ProfileShape::Tabulated { samples } => {
                let m = samples.len();
                let mf = m as f64;
                (0..=self.max_harmonic)
                    .map(|n| {
                        let s: f64 = samples
                            .iter()
                            .enumerate()
                            .map(|(j, h)| h * (2.0 * PI * ((n * j) % m) as f64 / mf).cos())
                            .sum();
                        let weight = if n == 0 || 2 * n == m { 1.0 } else { 2.0 };
                        weight * s / mf
                    })
                    .collect()
            }
        }
    }

    /// Reduces x into [−λ/2, λ/2).
    fn reduce(&self, x: f64) -> f64 {
        let r = x.rem_euclid(self.period);
        if r >= 0.5 * self.period {
            r - self.period
        } else {
            r
        }
    }

    fn series(&self, x: f64, derivative: u32) -> f64 {
        let k = self.wavenumber();
        let x = self.reduce(x);
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, a)| {
                let nk = n as f64 * k;
                match derivative {
                    0 => a * (nk * x).cos(),
                    1 => -a * nk * (nk * x).sin(),
                    _ => -a * nk * nk * (nk * x).cos(),
                }
            })
            .sum()
    }

    /// The exact profile height (the cosine series for tabulated profiles).
    pub fn height(&self, x: f64) -> f64 {
        match &self.shape {
            ProfileShape::Sinusoid { amplitude } => amplitude * (self.wavenumber() * self.reduce(x)).cos(),
            ProfileShape::RectangularGrooves { depth, width } => {
                if self.reduce(x).abs() > 0.5 * (self.period - width) {
                    -depth
                } else {
                    0.0
                }
            }
            ProfileShape::Tabulated { .. } => self.series(x, 0),
        }
    }

    /// dh/dx; zero away from the groove edges of a rectangular profile.
    pub fn slope(&self, x: f64) -> f64 {
        match &self.shape {
            ProfileShape::Sinusoid { amplitude } => {
                let k = self.wavenumber();
                -amplitude * k * (k * self.reduce(x)).sin()
            }
            ProfileShape::RectangularGrooves { .. } => 0.0,
            ProfileShape::Tabulated { .. } => self.series(x, 1),
        }
    }

    /// d²h/dx²; zero away from the groove edges of a rectangular profile.
    pub fn curvature(&self, x: f64) -> f64 {
        match &self.shape {
            ProfileShape::Sinusoid { amplitude } => {
                let k = self.wavenumber();
                -amplitude * k * k * (k * self.reduce(x)).cos()
            }
            ProfileShape::RectangularGrooves { .. } => 0.0,
            ProfileShape::Tabulated { .. } => self.series(x, 2),
        }
    }

    /// The truncated cosine series Σ_{n≤N} aₙ cos(nkx).
    pub fn resynthesize(&self, x: f64) -> f64 {
        self.series(x, 0)
    }

    pub fn max_abs_height(&self) -> f64 {
        match &self.shape {
            ProfileShape::Sinusoid { amplitude } => *amplitude,
            ProfileShape::RectangularGrooves { depth, .. } => *depth,
            ProfileShape::Tabulated { samples } => samples.iter().fold(0.0, |a, v| a.max(v.abs())),
        }
    }

    /// True when max|h|/z reaches [`AMPLITUDE_WARNING_RATIO`].
    pub fn amplitude_warning(&self, z: f64) -> bool {
        self.max_abs_height() / z >= AMPLITUDE_WARNING_RATIO
    }

    /// True when the cutoff is too low to resolve a groove profile: the
    /// series misses the plateau or groove center by more than
    /// [`GIBBS_TOLERANCE`] of the depth.
    pub fn gibbs_warning(&self) -> bool {
        let ProfileShape::RectangularGrooves { depth, .. } = self.shape else {
            return false;
        };
        [0.0, 0.5 * self.period]
            .iter()
            .any(|&x| (self.resynthesize(x) - self.height(x)).abs() > GIBBS_TOLERANCE * depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinusoid_coefficients() {
        let p = CorrugationProfile::sinusoid(4e-6, 250e-9).unwrap();
        assert_eq!(p.coefficients(), &[0.0, 250e-9]);
    }

    #[test]
    fn half_duty_grooves() {
        let a = 250e-9;
        let p = CorrugationProfile::rectangular(4e-6, a, 2e-6).unwrap();
        let c = p.coefficients();
        assert!((c[0] + a / 2.0).abs() < 1e-22);
        for (n, cn) in c.iter().enumerate().take(21).skip(1) {
            if n % 2 == 1 {
                assert!((cn.abs() - 2.0 * a / (n as f64 * PI)).abs() < 1e-20, "n = {n}");
            } else {
                assert!(cn.abs() < 1e-20, "n = {n}");
            }
        }
    }

    #[test]
    fn groove_coefficients_match_direct_integration() {
        // aₙ = (2/λ)∫ h cos(nkx) dx by a fine midpoint rule
        let (lambda, a, s) = (3e-6, 100e-9, 0.7e-6);
        let p = CorrugationProfile::rectangular(lambda, a, s).unwrap();
        let m = 200_000;
        for n in 0..6 {
            let mut sum = 0.0;
            for j in 0..m {
                let x = (j as f64 + 0.5) * lambda / m as f64;
                sum += p.height(x) * (n as f64 * p.wavenumber() * x).cos();
            }
            let expected = sum / m as f64 * if n == 0 { 1.0 } else { 2.0 };
            assert!((p.coefficients()[n] - expected).abs() < 1e-4 * a, "n = {n}");
        }
    }

    #[test]
    fn groove_resynthesis_away_from_edges() {
        let a = 250e-9;
        let lambda = 4e-6;
        let p = CorrugationProfile::rectangular(lambda, a, lambda / 2.0)
            .unwrap()
            .with_max_harmonic(201)
            .unwrap();
        for i in 0..400 {
            let x = i as f64 / 400.0 * lambda;
            let edge = (x - lambda / 4.0).abs().min((x - 3.0 * lambda / 4.0).abs());
            if edge < 0.05 * lambda {
                continue;
            }
            assert!((p.resynthesize(x) - p.height(x)).abs() < 0.01 * a, "x = {x}");
        }
        assert!(!p.gibbs_warning());
        assert!(p.clone().with_max_harmonic(3).unwrap().gibbs_warning());
    }

    #[test]
    fn tabulated_cosine() {
        let m = 64;
        let h0 = 1e-7;
        let samples: Vec<f64> = (0..m).map(|j| h0 * (2.0 * PI * j as f64 / m as f64).cos()).collect();
        let p = CorrugationProfile::tabulated(1e-6, samples).unwrap();
        let c = p.coefficients();
        assert!((c[1] - h0).abs() < 1e-10 * h0);
        for (n, v) in c.iter().enumerate() {
            if n != 1 {
                assert!(v.abs() < 1e-12 * h0, "n = {n}: {v}");
            }
        }
    }

    #[test]
    fn tabulated_rejects_odd_profile() {
        let samples = vec![0.0, 1.0, 0.0, -1.0];
        assert!(CorrugationProfile::tabulated(1.0, samples).is_err());
    }

    #[test]
    fn parses_table_with_closing_row() {
        let text = "# cosine\n0 1e-7\n0.25e-6 0\n0.5e-6 -1e-7\n0.75e-6 0\n1e-6 1e-7\n";
        let p = CorrugationProfile::parse_table(text).unwrap();
        assert!((p.period() - 1e-6).abs() < 1e-18);
        assert!((p.coefficients()[1] - 1e-7).abs() < 1e-20);
    }

    #[test]
    fn table_errors_carry_lines() {
        let text = "0 1\n1 2\n2.5 1\n";
        match CorrugationProfile::parse_table(text) {
            Err(Error::Data { line: Some(3), .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation() {
        assert!(CorrugationProfile::rectangular(1.0, 0.1, 1.0).is_err());
        assert!(CorrugationProfile::rectangular(1.0, 0.1, 0.0).is_err());
        assert!(CorrugationProfile::sinusoid(-1.0, 0.1).is_err());
        assert!(CorrugationProfile::sinusoid(1.0, 0.1).unwrap().with_max_harmonic(0).is_err());
    }

    #[test]
    fn amplitude_flag() {
        let p = CorrugationProfile::rectangular(4e-6, 250e-9, 2e-6).unwrap();
        assert!(!p.amplitude_warning(2e-6));
        assert!(p.amplitude_warning(1e-6));
    }
}

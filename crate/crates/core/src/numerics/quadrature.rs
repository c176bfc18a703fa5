//! Globally adaptive Gauss-Kronrod (10/21) quadrature.
//!
//! Semi-infinite ranges are mapped onto (0, 1] by x = a + s(1 − t)/t, where
//! the scale s should sit near the integrand's characteristic width.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::{Error, Result};

/// Tolerance contract for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    relative_tolerance: f64,
    absolute_tolerance: f64,
    max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(
        relative_tolerance: f64,
        absolute_tolerance: f64,
        max_subdivisions: usize,
    ) -> Result<Self> {
        if !(relative_tolerance > 0.0 && relative_tolerance < 1.0) {
            return Err(Error::domain(format!(
                "relative tolerance must lie in (0, 1), got {relative_tolerance}"
            )));
        }
        if !(absolute_tolerance >= 0.0) {
            return Err(Error::domain("absolute tolerance must be non-negative"));
        }
        if max_subdivisions < 1 {
            return Err(Error::domain("max subdivisions must be at least 1"));
        }
        Ok(Self {
            relative_tolerance,
            absolute_tolerance,
            max_subdivisions,
        })
    }

    /// Default for two-dimensional integrals: relative 1e−6.
    pub fn default_2d() -> Self {
        Self {
            relative_tolerance: 1e-6,
            ..Self::default()
        }
    }

    pub fn relative_tolerance(&self) -> f64 {
        self.relative_tolerance
    }

    pub fn absolute_tolerance(&self) -> f64 {
        self.absolute_tolerance
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }

    /// Same limits with a different relative tolerance (clamped into range).
    pub fn with_relative_tolerance(mut self, tol: f64) -> Self {
        self.relative_tolerance = tol.clamp(1e-15, 0.5);
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n.max(1);
        self
    }
}

impl Default for QuadratureSpec {
    /// Relative 1e−8, no absolute floor, 1000 subdivisions.
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-8,
            absolute_tolerance: 0.0,
            max_subdivisions: 1000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    /// Integral of the integrand magnitude, used to detect roundoff limits.
    pub magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { lower: f64, upper: f64 },
    /// (start, ∞) with a characteristic scale for the variable map.
    SemiInfinite { start: f64, scale: f64 },
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_741_262,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lower: f64,
    upper: f64,
    value: f64,
    error: f64,
    magnitude: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrand returning (value, |value|-like magnitude) at a point.
fn kronrod21<F>(f: &mut F, lower: f64, upper: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);
    let mut values = [0.0; 21];
    let mut mags = [0.0; 21];
    let (fc, mc) = f(center)?;
    values[20] = fc;
    mags[20] = mc;
    for j in 0..10 {
        let dx = half * XGK[j];
        let (a, ma) = f(center - dx)?;
        let (b, mb) = f(center + dx)?;
        values[2 * j] = a;
        values[2 * j + 1] = b;
        mags[2 * j] = ma;
        mags[2 * j + 1] = mb;
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(format!(
            "integrand is not finite on [{lower:e}, {upper:e}]"
        )));
    }

    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = WGK[10] * mc;
    for j in 0..10 {
        let pair = values[2 * j] + values[2 * j + 1];
        res_k += WGK[j] * pair;
        res_abs += WGK[j] * (mags[2 * j] + mags[2 * j + 1]);
        if j % 2 == 1 {
            res_g += WG[j / 2] * pair;
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((values[2 * j] - mean).abs() + (values[2 * j + 1] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel {
        lower,
        upper,
        value,
        error,
        magnitude: res_abs,
    })
}

/// Core adaptive driver on a finite interval of the (possibly mapped)
/// variable. The integrand supplies both its value and a magnitude, so that
/// nested integrals can pass up the size of their own integrand.
fn adapt<F>(mut f: F, lower: f64, upper: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let first = kronrod21(&mut f, lower, upper)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut total_mag = first.magnitude;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;

    let tolerance = |value: f64, mag: f64| {
        spec.absolute_tolerance
            .max(spec.relative_tolerance * value.abs())
            .max(100.0 * f64::EPSILON * mag)
            // results in the subnormal range cannot be refined further
            .max(f64::MIN_POSITIVE)
    };

    while total_err > tolerance(total, total_mag) {
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Convergence {
                estimate: total,
                error_bound: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lower + worst.upper);
        if !(mid > worst.lower && mid < worst.upper) {
            return Err(Error::Convergence {
                estimate: total,
                error_bound: total_err,
                subdivisions,
            });
        }
        let left = kronrod21(&mut f, worst.lower, mid)?;
        let right = kronrod21(&mut f, mid, worst.upper)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_mag += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // Resum to shed the drift of the running totals.
    let (value, error, magnitude) = heap.iter().fold((0.0, 0.0, 0.0), |acc, p| {
        (acc.0 + p.value, acc.1 + p.error, acc.2 + p.magnitude)
    });
    Ok(Estimate {
        value,
        error,
        magnitude,
    })
}

/// Adaptive integration of a fallible integrand that also reports a
/// magnitude (e.g. an inner integral's ∫|f|).
pub fn adaptive_with_magnitude<F>(mut f: F, domain: Domain, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    match domain {
        Domain::Finite { lower, upper } => {
            if !(lower.is_finite() && upper.is_finite()) {
                return Err(Error::domain("finite domain requires finite bounds"));
            }
            if lower == upper {
                return Ok(Estimate {
                    value: 0.0,
                    error: 0.0,
                    magnitude: 0.0,
                });
            }
            if lower > upper {
                let est = adapt(f, upper, lower, spec)?;
                return Ok(Estimate {
                    value: -est.value,
                    ..est
                });
            }
            adapt(f, lower, upper, spec)
        }
        Domain::SemiInfinite { start, scale } => {
            if !(scale > 0.0 && scale.is_finite() && start.is_finite()) {
                return Err(Error::domain("semi-infinite domain needs a finite start and positive scale"));
            }
            adapt(
                |t| {
                    let x = start + scale * (1.0 - t) / t;
                    let jac = scale / (t * t);
                    let (v, m) = f(x)?;
                    Ok((v * jac, m * jac))
                },
                0.0,
                1.0,
                spec,
            )
        }
    }
}

/// Adaptive integration of a fallible scalar integrand.
pub fn adaptive<F>(mut f: F, domain: Domain, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    adaptive_with_magnitude(
        |x| {
            let v = f(x)?;
            Ok((v, v.abs()))
        },
        domain,
        spec,
    )
}

/// ∫_lower^upper f(x) dx.
pub fn integrate_finite<F>(mut f: F, lower: f64, upper: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    adaptive(|x| Ok(f(x)), Domain::Finite { lower, upper }, spec).map(|e| e.value)
}

/// ∫₀^∞ f(x) dx for an integrand decaying at infinity.
pub fn integrate_semi_infinite<F>(mut f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    adaptive(
        |x| Ok(f(x)),
        Domain::SemiInfinite {
            start: 0.0,
            scale: 1.0,
        },
        spec,
    )
    .map(|e| e.value)
}

/// ∫∫ f(x, z) over the disk x² + z² ≤ radius², in polar coordinates.
pub fn integrate_2d_disk<F>(mut f: F, radius: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64, f64) -> f64,
{
    try_integrate_2d_disk(|x, z| Ok(f(x, z)), radius, spec).map(|e| e.value)
}

/// Fallible form of [`integrate_2d_disk`].
pub fn try_integrate_2d_disk<F>(mut f: F, radius: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain(format!("disk radius must be positive, got {radius}")));
    }
    let inner_spec = spec.with_relative_tolerance(spec.relative_tolerance * 0.1);
    adaptive_with_magnitude(
        |r| {
            let ring = adaptive(
                |theta| {
                    let (s, c) = theta.sin_cos();
                    f(r * c, r * s)
                },
                Domain::Finite {
                    lower: 0.0,
                    upper: 2.0 * PI,
                },
                &inner_spec,
            )?;
            Ok((r * ring.value, r * ring.magnitude))
        },
        Domain::Finite {
            lower: 0.0,
            upper: radius,
        },
        spec,
    )
}

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];

const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Fixed 8-point Gauss-Legendre rule on [lower, upper]. All weights are
/// positive, so sums of non-negative monotone integrands stay monotone.
pub(crate) fn gauss_legendre8<F>(mut f: F, lower: f64, upper: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let c = 0.5 * (lower + upper);
    let h = 0.5 * (upper - lower);
    let mut sum = 0.0;
    for (x, w) in GL8_NODES.iter().zip(&GL8_WEIGHTS) {
        sum += w * (f(c - h * x) + f(c + h * x));
    }
    sum * h
}

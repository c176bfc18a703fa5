//! Central differences with Richardson extrapolation (Ridders' scheme).

use crate::Result;

const SHRINK: f64 = 1.4;
const TABLE: usize = 10;
const SAFE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
}

/// df/dx at `x`. `scale` is the length over which `f` varies appreciably;
/// the first step is a tenth of it.
pub fn differentiate<F>(mut f: F, x: f64, scale: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    try_differentiate(|t| Ok(f(t)), x, scale)
        .map(|d| d.value)
        .expect("infallible integrand")
}

/// Fallible form of [`differentiate`] with an error estimate.
pub fn try_differentiate<F>(mut f: F, x: f64, scale: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    let scale = if scale > 0.0 && scale.is_finite() {
        scale
    } else {
        x.abs().max(1.0)
    };
    let mut h = 0.1 * scale;
    let mut table = [[0.0f64; TABLE]; TABLE];
    table[0][0] = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let mut best = Derivative {
        value: table[0][0],
        error: f64::INFINITY,
    };
    for i in 1..TABLE {
        h /= SHRINK;
        table[0][i] = (f(x + h)? - f(x - h)?) / (2.0 * h);
        let mut factor = SHRINK * SHRINK;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * factor - table[j - 1][i - 1]) / (factor - 1.0);
            factor *= SHRINK * SHRINK;
            let err = (table[j][i] - table[j - 1][i])
                .abs()
                .max((table[j][i] - table[j - 1][i - 1]).abs());
            if err <= best.error {
                best = Derivative {
                    value: table[j][i],
                    error: err,
                };
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * best.error {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_finite, QuadratureSpec};

    #[test]
    fn elementary_derivatives() {
        assert!((differentiate(|x| x * x, 3.0, 3.0) - 6.0).abs() < 1e-8);
        assert!((differentiate(|z| z.powi(-4), 2.0, 2.0) + 0.125).abs() < 1e-8);
        assert!((differentiate(|x| (-x).exp(), 1.0, 1.0) + (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn relative_accuracy_on_physical_scales() {
        // U ∝ z⁻⁴ at micrometre scale
        let z = 2e-6;
        let d = differentiate(|t| 1e-56 / t.powi(4), z, z);
        let exact = -4e-56 / z.powi(5);
        assert!(((d - exact) / exact).abs() < 1e-6);
    }

    #[test]
    fn recovers_integrand_from_quadrature_antiderivative() {
        let spec = QuadratureSpec::default().with_relative_tolerance(1e-12);
        let integrand = |t: f64| (-t * t).exp() * (1.0 + t).ln();
        for &x in &[0.3, 1.1, 2.5] {
            let d = differentiate(
                |u| integrate_finite(integrand, 0.0, u, &spec).unwrap(),
                x,
                1.0,
            );
            assert!((d - integrand(x)).abs() < 1e-5 * integrand(x).abs().max(1e-3));
        }
    }
}

//! Modified Bessel functions of the second kind K_n(x) for integer order.
//!
//! K₀ and K₁ come from their ascending series for x ≤ 2 and from Steed's
//! continued fraction (Temme's CF2) above; higher orders follow from the
//! upward recurrence K_{n+1} = K_{n−1} + (2n/x)K_n, which is stable for K.

use std::f64::consts::PI;

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_SWITCH: f64 = 2.0;
const MAX_TERMS: usize = 500;

/// K_order(x) for x > 0.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "bessel_k requires a positive finite argument, got {x}"
        )));
    }
    let (k0, k1) = k01(x);
    match order {
        0 => Ok(k0),
        1 => Ok(k1),
        _ => {
            let (mut prev, mut cur) = (k0, k1);
            for n in 1..order {
                let next = prev + 2.0 * f64::from(n) / x * cur;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
    }
}

/// (K₀(x), K₁(x)) for x > 0.
pub fn bessel_k01(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "bessel_k requires a positive finite argument, got {x}"
        )));
    }
    Ok(k01(x))
}

fn k01(x: f64) -> (f64, f64) {
    if x <= SERIES_SWITCH {
        k01_series(x)
    } else {
        k01_continued_fraction(x)
    }
}

fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // term_k = y^k / (k!)^2 and term1_k = y^k / (k! (k+1)!)
    let mut term = 1.0;
    let mut term1 = 1.0;
    let mut i0 = 0.0;
    let mut i1_over_half_x = 0.0;
    let mut k0_sum = 0.0;
    let mut k1_sum = 0.0;
    // harmonic number H_k
    let mut harmonic = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        if k > 0 {
            term *= y / (kf * kf);
            term1 *= y / (kf * (kf + 1.0));
            harmonic += 1.0 / kf;
        }
        i0 += term;
        i1_over_half_x += term1;
        k0_sum += harmonic * term;
        // ψ(k+1) + ψ(k+2) = 2H_k + 1/(k+1) − 2γ
        let psi_pair = 2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        k1_sum += psi_pair * term1;
        if term < 1e-18 * i0 && term1 < 1e-18 * i1_over_half_x {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_sum;
    let i1 = 0.5 * x * i1_over_half_x;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_sum;
    (k0, k1)
}

fn k01_continued_fraction(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K_n(x) = ∫₀^∞ exp(−x cosh t) cosh(nt) dt by the trapezoid rule, which
    /// converges geometrically for this analytic, doubly decaying integrand.
    fn integral_oracle(n: u32, x: f64) -> f64 {
        let h: f64 = 1.0 / 64.0;
        let mut sum = 0.5 * (-x).exp();
        let mut t = h;
        loop {
            let v = (-x * t.cosh() + f64::from(n) * t).exp() * 0.5
                * (1.0 + (-2.0 * f64::from(n) * t).exp());
            sum += v;
            if v < 1e-300 || v < sum * 1e-20 {
                break;
            }
            t += h;
        }
        sum * h
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_argument_limits() {
        let x = 1e-4;
        assert!((bessel_k(2, x).unwrap() * x * x - 2.0).abs() < 1e-6);
        assert!((bessel_k(3, x).unwrap() * x.powi(3) - 8.0).abs() < 1e-6);
    }

    #[test]
    fn k2_at_two_matches_oracles() {
        let k2 = bessel_k(2, 2.0).unwrap();
        // 30-digit reference value
        assert!(rel(k2, 0.253_759_754_566_055_86) < 1e-13);
        assert!(rel(k2, integral_oracle(2, 2.0)) < 1e-12);
    }

    #[test]
    fn frozen_reference_values() {
        let table: &[(u32, f64, f64)] = &[
            (0, 1e-6, 13.931_442_073_626_419),
            (0, 0.5, 0.924_419_071_227_665_9),
            (0, 2.5, 0.062_347_553_200_366_19),
            (0, 50.0, 3.410_167_749_789_495_5e-23),
            (1, 1e-6, 999_999.999_992_784_3),
            (1, 1.0, 0.601_907_230_197_234_6),
            (1, 10.0, 1.864_877_345_382_558_5e-5),
            (2, 0.1, 199.503_964_642_114_14),
            (2, 5.0, 0.005_308_943_712_223_46),
            (3, 1e-3, 7_999_999_000.000_125),
            (3, 2.0, 0.647_385_390_948_634_2),
            (3, 30.0, 2.471_331_063_658_993e-14),
        ];
        for &(n, x, expected) in table {
            let got = bessel_k(n, x).unwrap();
            assert!(rel(got, expected) < 1e-10, "K_{n}({x}) = {got}, want {expected}");
        }
    }

    #[test]
    fn agrees_with_integral_representation() {
        for n in 0..=3 {
            for &x in &[0.01, 0.3, 1.0, 1.99, 2.01, 4.0, 12.0, 35.0, 50.0] {
                let got = bessel_k(n, x).unwrap();
                let want = integral_oracle(n, x);
                assert!(rel(got, want) < 1e-10, "K_{n}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn recurrence_holds() {
        let mut x: f64 = 0.01;
        while x <= 30.0 {
            for n in 1..=2u32 {
                let lhs = bessel_k(n + 1, x).unwrap();
                let rhs = bessel_k(n - 1, x).unwrap() + 2.0 * f64::from(n) / x * bessel_k(n, x).unwrap();
                assert!(rel(lhs, rhs) < 1e-9);
            }
            x *= 1.37;
        }
    }

    #[test]
    fn continuity_at_switch() {
        let below = k01_series(SERIES_SWITCH);
        let above = k01_continued_fraction(SERIES_SWITCH);
        assert!(rel(below.0, above.0) < 1e-13);
        assert!(rel(below.1, above.1) < 1e-13);
    }

    #[test]
    fn rejects_non_positive_argument() {
        assert!(matches!(bessel_k(2, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(2, -1.0), Err(Error::Domain(_))));
        assert!(bessel_k(0, f64::NAN).is_err());
    }
}

use lateral_casimir::kernel::rho;
use lateral_casimir::lateral::LateralPotentialField;
use lateral_casimir::numerics::differentiate;
use lateral_casimir::plane::u0_plane;
use lateral_casimir::response::{alpha_at, epsilon_at, kramers_kronig, LorentzOscillator};
use lateral_casimir::trap::{gamma_from_curvature, gamma_linear_from_curvature, TrapConfiguration};
use lateral_casimir::{AtomResponse, CorrugationProfile, MaterialResponse, OpticalDataTable, QuadratureSpec, ResponseKernel};
use proptest::prelude::*;

fn cp() -> ResponseKernel {
    ResponseKernel::perfect_cp(AtomResponse::rubidium_standin())
}

fn vdw() -> ResponseKernel {
    ResponseKernel::perfect_vdw(AtomResponse::rubidium_standin(), &QuadratureSpec::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn drude_and_lorentz_decrease_on_imaginary_axis(
        wp in 1e14..1e17f64, gamma in 1e11..1e15f64, xi in 1e10..1e17f64, step in 1.01..10.0f64,
    ) {
        let d = MaterialResponse::drude(wp, gamma).unwrap();
        let (a, b) = (epsilon_at(&d, xi).unwrap(), epsilon_at(&d, xi * step).unwrap());
        prop_assert!(a > 1.0 && b > 1.0 && b < a);
        let l = MaterialResponse::lorentz(vec![LorentzOscillator { strength: 2.0, resonance: wp, damping: gamma }]).unwrap();
        let (a, b) = (epsilon_at(&l, xi).unwrap(), epsilon_at(&l, xi * step).unwrap());
        prop_assert!(a >= 1.0 && b >= 1.0 && b <= a);
    }

    #[test]
    fn polarizability_decreases(xi in 0.0..1e17f64, step in 1.01..10.0f64) {
        let atom = AtomResponse::rubidium_standin();
        let a = alpha_at(&atom, xi).unwrap();
        let b = alpha_at(&atom, xi * step + 1.0).unwrap();
        prop_assert!(b < a && b > 0.0);
    }

    #[test]
    fn kramers_kronig_is_monotone(loss in prop::collection::vec(1e-3..1e3f64, 8..40), xi in 1e11..1e16f64) {
        let rows: Vec<(f64, f64)> = loss.iter().enumerate().map(|(i, l)| (1e12 * 1.5f64.powi(i as i32), *l)).collect();
        let table = OpticalDataTable::new(rows, "random").unwrap();
        let a = kramers_kronig(&table, xi).unwrap().epsilon;
        let b = kramers_kronig(&table, 2.0 * xi).unwrap().epsilon;
        prop_assert!(a > 1.0 && b > 1.0 && b <= a);
    }

    #[test]
    fn lateral_potential_periodic_and_even(
        x in -1e-5..1e-5f64, width in 0.1..0.9f64, kz in 0.3..8.0f64,
    ) {
        let p = CorrugationProfile::rectangular(4e-6, 100e-9, width * 4e-6).unwrap();
        let f = LateralPotentialField::new(&p, &cp(), kz / p.wavenumber()).unwrap();
        let u = f.potential(x);
        let scale = f.terms().iter().map(|t| t.energy().abs()).sum::<f64>();
        prop_assert!((f.potential(x + 4e-6) - u).abs() <= 1e-12 * scale);
        prop_assert!((f.potential(-x) - u).abs() <= 1e-12 * scale);
    }

    #[test]
    fn rho_bounded_and_monotone(kz in 0.0..20.0f64, dk in 0.01..2.0f64, z in 1e-9..1e-5f64) {
        for kernel in [cp(), vdw()] {
            let r = rho(&kernel, kz / z, z).unwrap();
            let r_k = rho(&kernel, (kz + dk) / z, z).unwrap();
            let r_z = rho(&kernel, kz / z, z * (1.0 + dk)).unwrap();
            prop_assert!(r > 0.0 && r <= 1.0);
            prop_assert!(r_k < r);
            prop_assert!(kz == 0.0 || r_z < r);
            prop_assert!(kernel.g(kz / z, z).unwrap() < 0.0);
        }
    }

    #[test]
    fn first_order_shift_matches_exact(c in -1e-3..1e-3f64) {
        let trap = TrapConfiguration::point(1e3, 1.4e-25, 2e-6).unwrap();
        let curvature = c * trap.stiffness();
        let exact = gamma_from_curvature(curvature, &trap).unwrap();
        let linear = gamma_linear_from_curvature(curvature, &trap);
        prop_assert!(c == 0.0 || ((exact - linear) / exact).abs() < 1e-3);
    }

    #[test]
    fn cp_kernel_scales_as_inverse_fifth_power(kz in 0.0..10.0f64, s in 0.1..10.0f64) {
        let z = 1e-6;
        let g1 = cp().g(kz / z, z).unwrap();
        let g2 = cp().g(kz / (s * z), s * z).unwrap();
        prop_assert!((g2 * s.powi(5) / g1 - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn plane_potential_log_slope_between_laws(log_z in -9.0..-4.0f64) {
        let atom = AtomResponse::rubidium_standin();
        let mirror = MaterialResponse::perfect_reflector();
        let spec = QuadratureSpec::default();
        let u = |t: f64| u0_plane(&atom, &mirror, t.exp(), &spec).unwrap().value;
        let ln_z = log_z * std::f64::consts::LN_10;
        let slope = differentiate(|t| (-u(t)).ln(), ln_z, 0.1);
        prop_assert!((-4.0 - 1e-6..=-3.0 + 1e-6).contains(&slope), "slope {}", slope);
        prop_assert!(u(ln_z) < u(ln_z + 0.05));
    }
}

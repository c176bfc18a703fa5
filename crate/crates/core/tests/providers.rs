use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use lateral_casimir::kernel::{g_general, rho, Polarization, SpecularLimitProvider};
use lateral_casimir::plane::pfa_reference;
use lateral_casimir::{
    AtomResponse, Error, KernelKind, MaterialResponse, NonspecularProvider, QuadratureSpec, ResponseKernel, Result,
};

fn atom() -> AtomResponse {
    AtomResponse::rubidium_standin()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default_2d()
}

struct Zero;

impl NonspecularProvider for Zero {
    fn amplitude(&self, _: f64, _: [f64; 2], _: [f64; 2], _: Polarization, _: Polarization) -> Result<f64> {
        Ok(0.0)
    }
}

struct Scaled(SpecularLimitProvider, f64);

impl NonspecularProvider for Scaled {
    fn amplitude(&self, xi: f64, k1: [f64; 2], k2: [f64; 2], p1: Polarization, p2: Polarization) -> Result<f64> {
        Ok(self.1 * self.0.amplitude(xi, k1, k2, p1, p2)?)
    }
}

/// Not reentrant: fails if two calls overlap.
struct Exclusive {
    inner: SpecularLimitProvider,
    active: AtomicUsize,
    calls: AtomicUsize,
}

impl NonspecularProvider for Exclusive {
    fn amplitude(&self, xi: f64, k1: [f64; 2], k2: [f64; 2], p1: Polarization, p2: Polarization) -> Result<f64> {
        if self.active.fetch_add(1, Ordering::SeqCst) != 0 {
            return Err(Error::Provider("overlapping call".into()));
        }
        self.calls.fetch_add(1, Ordering::Relaxed);
        let r = self.inner.amplitude(xi, k1, k2, p1, p2);
        self.active.fetch_sub(1, Ordering::SeqCst);
        r
    }

    fn concurrent_safe(&self) -> bool {
        false
    }
}

struct Failing;

impl NonspecularProvider for Failing {
    fn amplitude(&self, _: f64, _: [f64; 2], _: [f64; 2], _: Polarization, _: Polarization) -> Result<f64> {
        Err(Error::Provider("no data".into()))
    }
}

#[test]
fn specular_limit_reproduces_flat_force() {
    for material in [MaterialResponse::perfect_reflector(), MaterialResponse::drude(1.37e16, 5.32e13).unwrap()] {
        let provider = Arc::new(SpecularLimitProvider::new(material.clone()));
        let kernel = ResponseKernel::custom(atom(), material.clone(), provider, spec()).unwrap();
        assert_eq!(kernel.kind(), KernelKind::Custom);
        for z in [100e-9, 1e-6] {
            let g = kernel.g(0.0, z).unwrap();
            let reference = pfa_reference(&atom(), &material, z, &QuadratureSpec::default()).unwrap();
            assert!(((g - reference) / reference).abs() < 1e-3, "z = {z}: {g} vs {reference}");
        }
    }
}

#[test]
fn zero_provider_gives_zero_and_is_rejected() {
    let mirror = MaterialResponse::perfect_reflector();
    let kernel = ResponseKernel::custom_unchecked(atom(), mirror.clone(), Arc::new(Zero), spec());
    assert_eq!(g_general(&kernel, 1e6, 1e-6, &spec()).unwrap(), 0.0);
    assert!(matches!(
        ResponseKernel::custom(atom(), mirror, Arc::new(Zero), spec()),
        Err(Error::Provider(_))
    ));
}

#[test]
fn output_is_linear_in_provider() {
    let mirror = MaterialResponse::perfect_reflector();
    let base = ResponseKernel::custom_unchecked(
        atom(),
        mirror.clone(),
        Arc::new(SpecularLimitProvider::new(mirror.clone())),
        spec(),
    );
    let scaled = ResponseKernel::custom_unchecked(
        atom(),
        mirror.clone(),
        Arc::new(Scaled(SpecularLimitProvider::new(mirror), 2.5)),
        spec(),
    );
    let (k, z) = (1e6, 1e-6);
    let a = base.g(k, z).unwrap();
    let b = scaled.g(k, z).unwrap();
    assert!((b / a - 2.5).abs() < 1e-9, "{}", b / a);
    // ρ of the specular-limit provider decays with k
    let r = rho(&base, k, z).unwrap();
    assert!(r > 0.0 && r < 1.0);
}

#[test]
fn unsafe_providers_are_serialized() {
    let mirror = MaterialResponse::perfect_reflector();
    let provider = Arc::new(Exclusive {
        inner: SpecularLimitProvider::new(mirror.clone()),
        active: AtomicUsize::new(0),
        calls: AtomicUsize::new(0),
    });
    let kernel = ResponseKernel::custom_unchecked(atom(), mirror, provider.clone(), spec());
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..4).map(|i| {
            let kernel = &kernel;
            s.spawn(move || kernel.g(0.0, 0.5e-6 * (i + 1) as f64))
        }).collect();
        for h in handles {
            h.join().unwrap().unwrap();
        }
    });
    assert!(provider.calls.load(Ordering::Relaxed) > 0);
}

#[test]
fn provider_errors_propagate() {
    let mirror = MaterialResponse::perfect_reflector();
    let kernel = ResponseKernel::custom_unchecked(atom(), mirror, Arc::new(Failing), spec());
    assert_eq!(kernel.g(0.0, 1e-6), Err(Error::Provider("no data".into())));
}

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lateral_casimir::scenarios::{bec_sweep, default_trap, kernel_sweep, shift_sweep, GrooveFamily};
use lateral_casimir::{AtomResponse, CorrugationProfile, Execution, QuadratureSpec, ResponseKernel};
use std::hint::black_box;

#[cfg(feature = "parallel")]
const MODES: &[Execution] = &[Execution::Sequential, Execution::Parallel];
#[cfg(not(feature = "parallel"))]
const MODES: &[Execution] = &[Execution::Sequential];

fn sweeps(c: &mut Criterion) {
    let kernel = ResponseKernel::perfect_cp(AtomResponse::rubidium_standin());
    let trap = default_trap();
    let family = GrooveFamily::default();
    let kz: Vec<f64> = (1..=40).map(|i| 0.25 * i as f64).collect();
    let fine: Vec<f64> = (1..=400).map(|i| 0.025 * i as f64).collect();
    let grooves = CorrugationProfile::rectangular(4e-6, 250e-9, 2e-6).unwrap();
    let radii: Vec<f64> = (0..8).map(|i| 0.2e-6 * i as f64).collect();
    let spec = QuadratureSpec::default_2d();

    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for &exec in MODES {
        let label = format!("{exec:?}");
        group.bench_with_input(BenchmarkId::new("kernel_sweep", &label), &exec, |b, &e| {
            b.iter(|| kernel_sweep(&kernel, 10e-6, 10e-9, black_box(&fine), e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("shift_sweep", &label), &exec, |b, &e| {
            b.iter(|| shift_sweep(&kernel, &family, &trap, black_box(&kz), &[1e-5, 1e-4], e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bec_sweep", &label), &exec, |b, &e| {
            b.iter(|| bec_sweep(&kernel, &grooves, &trap, black_box(&radii), &spec, e).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);

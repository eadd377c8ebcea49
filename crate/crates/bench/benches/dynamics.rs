use std::hint::black_box;

use anyonic::analysis::{extract_frequency, fit_relaxation_rate, linspace, sweep_phi, trace_series};
use anyonic::dynamics::{propagator_closed, propagator_numeric, trace_closed};
use anyonic::entropy::annotate_trajectory;
use anyonic::linalg::{expm, herm_eig, ComplexMatrix, C64};
use anyonic::{build_hamiltonian, trajectory};
use anyonic_bench::preset;
use criterion::{criterion_group, criterion_main, Criterion};

fn kernels(c: &mut Criterion) {
    let cfg = preset("fig_phe_a", 400.0);
    let h = build_hamiltonian(&cfg.params);
    c.bench_function("propagator_numeric_2x2", |b| b.iter(|| propagator_numeric(black_box(&h), 3.7)));
    c.bench_function("propagator_closed_2x2", |b| b.iter(|| propagator_closed(black_box(&cfg.params), 3.7)));
    c.bench_function("trace_closed", |b| b.iter(|| trace_closed(black_box(&cfg.params), 3.7)));

    let m = ComplexMatrix::new(
        4,
        (0..16).map(|k| C64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos())).collect(),
    )
    .unwrap();
    let herm = (&m + &m.adjoint()).scale_real(0.5);
    c.bench_function("expm_4x4", |b| b.iter(|| expm(black_box(&m))));
    c.bench_function("herm_eig_4x4", |b| b.iter(|| herm_eig(black_box(&herm))));
}

fn pipelines(c: &mut Criterion) {
    let cfg = preset("fig_phe_a", 100.0);
    c.bench_function("trajectory_2001_points", |b| b.iter(|| trajectory(black_box(&cfg))));
    let traj = trajectory(&cfg).unwrap();
    c.bench_function("annotate_2001_points", |b| {
        b.iter(|| annotate_trajectory(traj.clone(), &cfg.alphas, None))
    });
    let tr = traj.observables.tr_omega.clone();
    c.bench_function("extract_frequency", |b| b.iter(|| extract_frequency(black_box(&tr), cfg.dt)));
    c.bench_function("fit_relaxation_rate", |b| b.iter(|| fit_relaxation_rate(black_box(&tr), cfg.dt)));

    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let grid = linspace(-std::f64::consts::FRAC_PI_2, -std::f64::consts::PI / 36.0, 16);
    group.bench_function("phi_sweep_16_rows", |b| b.iter(|| sweep_phi(&cfg, black_box(&grid), trace_series)));
    group.finish();
}

criterion_group!(benches, kernels, pipelines);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use catsim::bases::{build_kerr_basis, build_shifted_fock};
use catsim::fit::{fit_decay, FitModel};
use catsim::linalg::expm;
use catsim::lindblad::{build_liouvillian, evolve, steady_state, DensityMatrix, RealLiouvillian};
use catsim::model::{build_model, ModelOptions};
use catsim::operators::default_fock_dim;
use catsim::params::SystemParams;

fn bases(c: &mut Criterion) {
    let a2 = 6.0;
    let dim = default_fock_dim(a2);
    c.bench_function("kerr_basis_a2_6", |b| {
        b.iter(|| build_kerr_basis(1.0, black_box(a2), dim, 5).unwrap())
    });
    c.bench_function("shifted_fock_a2_6", |b| {
        b.iter(|| build_shifted_fock(black_box(a2).sqrt(), 5).unwrap())
    });
}

fn generators(c: &mut Criterion) {
    let model = build_model(&SystemParams::colored(6.0, 3), &ModelOptions::default()).unwrap();
    c.bench_function("liouvillian_dim40", |b| {
        b.iter(|| build_liouvillian(black_box(&model.hamiltonian), &model.dissipators).unwrap())
    });
    let real = RealLiouvillian::new(&model.hamiltonian, &model.dissipators).unwrap();
    let step = real.matrix().mapv(|x| x * 1e-8);
    let mut group = c.benchmark_group("propagator");
    group.sample_size(10);
    group.bench_function("expm_real_1600", |b| b.iter(|| expm(black_box(&step)).unwrap()));
    group.finish();
}

fn dynamics(c: &mut Criterion) {
    let model = build_model(&SystemParams::bare_kerr(4.0), &ModelOptions::default()).unwrap();
    let rho0 = DensityMatrix::pure(&model.logical_state(0, 0).unwrap()).unwrap();
    let obs = model.observables().unwrap();
    let grid: Vec<f64> = (0..101).map(|i| i as f64 * 1e-6).collect();
    c.bench_function("evolve_bare_kerr_101pts", |b| {
        b.iter(|| evolve(&rho0, &model.hamiltonian, &model.dissipators, black_box(&grid), &obs).unwrap())
    });
    c.bench_function("steady_state_bare_kerr", |b| {
        b.iter(|| steady_state(black_box(&model.hamiltonian), &model.dissipators).unwrap())
    });
}

fn fitting(c: &mut Criterion) {
    let t: Vec<f64> = (0..501).map(|i| i as f64 * 1e-6).collect();
    let exp: Vec<f64> = t.iter().map(|&x| 0.9 * (-628.0 * x).exp()).collect();
    let osc: Vec<f64> = t
        .iter()
        .map(|&x| (-2e3 * x).exp() * (6e4 * x + 0.3).cos() + 0.05)
        .collect();
    c.bench_function("fit_exponential_501", |b| {
        b.iter_batched(
            || exp.clone(),
            |v| fit_decay(&t, &v, FitModel::Exponential, (0.0, 5e-4)).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("fit_damped_sinusoid_501", |b| {
        b.iter(|| fit_decay(&t, black_box(&osc), FitModel::DampedSinusoid, (0.0, 5e-4)).unwrap())
    });
}

criterion_group!(benches, bases, generators, dynamics, fitting);
criterion_main!(benches);

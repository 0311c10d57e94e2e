use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use trotter_core::bessel::{trotter_error_curve, BesselBasis, InitialState};
use trotter_core::dense::{random_pair, trotter_error};
use trotter_core::hydrogen::HydrogenLevel;
use trotter_core::{derive_bound, suzuki_times, ProductFormula};

fn bound_derivation(c: &mut Criterion) {
    let mut g = c.benchmark_group("derive_bound");
    g.sample_size(10);
    for p in [2, 4] {
        let pf = suzuki_times(p).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(p), &pf, |b, pf| b.iter(|| derive_bound(black_box(pf), true).unwrap()));
    }
    g.finish();
}

fn basis_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel_basis");
    g.sample_size(10);
    for modes in [50, 200] {
        g.bench_with_input(BenchmarkId::from_parameter(modes), &modes, |b, &m| b.iter(|| BesselBasis::build(0, 30.0, m).unwrap()));
    }
    g.finish();
}

fn spectral_sweep(c: &mut Criterion) {
    let basis = BesselBasis::build(2, 40.0, 200).unwrap();
    let init = InitialState::Level(HydrogenLevel::nl(3, 2).unwrap());
    let pf = ProductFormula::first_order();
    let ns: Vec<usize> = (10..=100).step_by(10).collect();
    // warm the cached spectrum so only stepping is timed
    trotter_error_curve(&basis, &init, &pf, 1.0, &[1], 1e-2).unwrap();
    c.bench_function("sweep_320_m200", |b| b.iter(|| trotter_error_curve(&basis, &init, &pf, 1.0, black_box(&ns), 1e-2).unwrap()));
}

fn dense_error(c: &mut Criterion) {
    let pair = random_pair(&mut ChaCha8Rng::seed_from_u64(1), 8, 1.0);
    let pf = suzuki_times(4).unwrap();
    c.bench_function("dense_p4_d8_n64", |b| b.iter(|| trotter_error(&pair, &pf, 1.0, black_box(64)).unwrap()));
}

criterion_group!(benches, bound_derivation, basis_build, spectral_sweep, dense_error);
criterion_main!(benches);

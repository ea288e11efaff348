use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ptlattice::bound::find_bound_states;
use ptlattice::exceptional::find_eps_general;
use ptlattice::scattering::{perfect_transmission, solve_scattering};
use ptlattice::spectrum::{siegert_roots, solve_discrete_spectrum, sweep_spectrum};
use ptlattice::{Axis, Direction, ModelParams};

fn spectrum(c: &mut Criterion) {
    let p = ModelParams::new(0.05, -1.1, 0.3).unwrap();
    c.bench_function("siegert_roots", |b| b.iter(|| siegert_roots(black_box(&p)).unwrap()));
    c.bench_function("discrete_spectrum", |b| b.iter(|| solve_discrete_spectrum(black_box(&p)).unwrap()));
    c.bench_function("bound_states", |b| b.iter(|| find_bound_states(black_box(&p)).unwrap()));
    let grid: Vec<f64> = (0..100).map(|i| 0.03 * f64::from(i)).collect();
    let base = ModelParams::new(0.0, 0.2, 0.0).unwrap();
    c.bench_function("sweep_100", |b| {
        b.iter(|| sweep_spectrum(black_box(&base), Axis::Gamma, black_box(&grid)).unwrap())
    });
}

fn scattering(c: &mut Criterion) {
    let p = ModelParams::new(0.1, 0.2, 0.7).unwrap();
    c.bench_function("solve_scattering", |b| {
        b.iter(|| solve_scattering(black_box(&p), black_box(1.1), Direction::LeftToRight).unwrap())
    });
    c.bench_function("perfect_transmission", |b| {
        b.iter(|| perfect_transmission(black_box(&p), Direction::LeftToRight).unwrap())
    });
}

fn exceptional(c: &mut Criterion) {
    c.bench_function("find_eps_600", |b| {
        b.iter(|| find_eps_general(black_box(0.05), black_box(-1.1), (0.0, 3.0), 600).unwrap())
    });
}

criterion_group!(benches, spectrum, scattering, exceptional);
criterion_main!(benches);

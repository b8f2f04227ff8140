use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hermsym::spectral::eigendecompose;
use hermsym::symmetry::construct_suite;
use hermsym::{EigenOrdering, Tolerances};
use hermsym_bench::{dense_fixture, grid_fixture};

fn dense_jacobi(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_eigendecompose");
    for n in [8, 16, 64] {
        let h = dense_fixture(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| eigendecompose(h, EigenOrdering::Ascending).unwrap())
        });
    }
    group.finish();
}

fn dense_suite(c: &mut Criterion) {
    let h = dense_fixture(64);
    let s = eigendecompose(&h, EigenOrdering::Ascending).unwrap();
    c.bench_function("suite_64", |b| {
        b.iter(|| construct_suite(&h, &s, &Tolerances::default()).unwrap())
    });
}

fn grid_spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_eigendecompose");
    group.sample_size(10);
    for (name, potential) in [("symmetric", "0.5*x^2"), ("asymmetric", "x^4 - 2*x^2 + 0.3*x")] {
        let h = grid_fixture(potential, 401);
        group.bench_with_input(BenchmarkId::new(name, 401), &h, |b, h| {
            b.iter(|| eigendecompose(h, EigenOrdering::Ascending).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, dense_jacobi, dense_suite, grid_spectrum);
criterion_main!(benches);

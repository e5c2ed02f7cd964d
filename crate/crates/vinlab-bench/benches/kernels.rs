//! Benchmarks for the hot kernels: the streaming dense counting cascade,
//! the sparse hashed engine, exponential sums, and the DFT oracle.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vinlab::{
    dft_mean_value, mean_value, weyl_sum, Budget, ExponentSet, Interval, SystemSpec,
};

fn bench_dense_cascade(c: &mut Criterion) {
    let e12 = ExponentSet::full(2).unwrap();
    let mut group = c.benchmark_group("dense_cascade_j52");
    group.sample_size(10);
    for x in [16u64, 32, 64] {
        group.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| mean_value(&e12, 5, Interval::new(1, x), Budget::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_sparse_engine(c: &mut Criterion) {
    let e123 = ExponentSet::full(3).unwrap();
    let mut group = c.benchmark_group("sparse_engine_j23");
    group.sample_size(10);
    for x in [6u64, 8, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            let spec = SystemSpec::mean_value(e123.clone(), 2, Interval::new(1, x));
            b.iter(|| vinlab::constrained_count(&spec, Budget::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_weyl_sum(c: &mut Criterion) {
    let e12 = ExponentSet::full(2).unwrap();
    let alpha = [0.123456789, 0.987654321];
    let mut group = c.benchmark_group("weyl_sum");
    for x in [1_000u64, 10_000, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| weyl_sum(&alpha, x, &e12).unwrap())
        });
    }
    group.finish();
}

fn bench_dft_oracle(c: &mut Criterion) {
    let e12 = ExponentSet::full(2).unwrap();
    let mut group = c.benchmark_group("dft_oracle_j22");
    group.sample_size(10);
    for x in [4u64, 8, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| dft_mean_value(&e12, 2, x).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_dense_cascade,
    bench_sparse_engine,
    bench_weyl_sum,
    bench_dft_oracle
);
criterion_main!(benches);

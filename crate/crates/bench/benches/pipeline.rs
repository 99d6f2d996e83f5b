use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mpencil::harness::{preset, run_table, ExampleId};
use mpencil::numkernels::{eigenvalues, gsvd, svd};
use mpencil::{estimate, EstimatorOptions, RankPolicy, Truncation};
use mpencil_bench::{dense, example_samples};

fn bench_estimate(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate");
    for n in [12, 24, 48] {
        let samples = example_samples(ExampleId::Ex1, n, 0.0);
        group.bench_with_input(BenchmarkId::new("ex1_exact", n), &samples, |b, s| {
            b.iter(|| estimate(black_box(s), 10, &EstimatorOptions::default()).unwrap())
        });
    }
    let noisy = example_samples(ExampleId::Ex2, 50, 1e-9);
    for (label, truncation) in [("subspace", Truncation::Subspace), ("leading", Truncation::LeadingColumns)] {
        let opts = EstimatorOptions {
            rank_policy: RankPolicy::Noise { delta: 1e-9 },
            truncation,
            ..Default::default()
        };
        group.bench_function(BenchmarkId::new("ex2_noisy_n50", label), |b| {
            b.iter(|| estimate(black_box(&noisy), 10, &opts).unwrap())
        });
    }
    let circle = example_samples(ExampleId::Ex6R08, 40, 0.0);
    group.bench_function("ex6_r08_n40", |b| {
        b.iter(|| estimate(black_box(&circle), 40, &EstimatorOptions::default()).unwrap())
    });
    group.finish();
}

fn bench_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernels");
    let (a, b) = (dense(64, 40, 0), dense(64, 40, 1));
    group.bench_function("svd_64x40", |bch| bch.iter(|| svd(black_box(&a)).unwrap()));
    group.bench_function("gsvd_64x40", |bch| bch.iter(|| gsvd(black_box(&a), black_box(&b)).unwrap()));
    let square = dense(40, 40, 2);
    group.bench_function("eigenvalues_40x40", |bch| bch.iter(|| eigenvalues(black_box(&square)).unwrap()));
    group.finish();
}

fn bench_tables(c: &mut Criterion) {
    let table = preset("table2").unwrap();
    c.bench_function("reproduce_table2", |b| b.iter(|| run_table(black_box(&table), 7).unwrap()));
}

criterion_group!(benches, bench_estimate, bench_kernels, bench_tables);
criterion_main!(benches);

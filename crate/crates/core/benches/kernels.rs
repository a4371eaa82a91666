//! Kernel timings on a single worker against the default pool. Build with
//! `--no-default-features` to time the sequential fallback.

use std::hint::black_box;

use bijsum_core::counting::{count_tuples, injection_distribution_distance, FunctionTable, Strategy};
use bijsum_core::latin::{count_transversals, LatinCube};
use bijsum_core::par::{current_threads, with_threads};
use bijsum_core::{AbelianGroup, Budgets, CharacterVector, FourierEngine};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn pools() -> Vec<(String, Option<usize>)> {
    let all = current_threads();
    let mut v = vec![("1-thread".to_string(), Some(1))];
    if all > 1 {
        v.push((format!("{all}-threads"), None));
    }
    v
}

fn kernels(c: &mut Criterion) {
    let b = Budgets::default();
    let z12 = AbelianGroup::cyclic(12).unwrap();
    let chi = CharacterVector::new(&z12, (0..12).collect()).unwrap();
    let z8 = AbelianGroup::cyclic(8).unwrap();
    let z7 = AbelianGroup::cyclic(7).unwrap();
    let z5 = AbelianGroup::cyclic(5).unwrap();
    let k3 = AbelianGroup::new(&[2, 2, 2]).unwrap();

    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    for (label, threads) in pools() {
        group.bench_with_input(BenchmarkId::new("permanent-n12", &label), &threads, |bn, &t| {
            let e = FourierEngine::new(&z12);
            bn.iter(|| with_threads(t, || black_box(e.coeff_direct(&chi).unwrap())))
        });
        group.bench_with_input(BenchmarkId::new("sparse-sum-z8-m3", &label), &threads, |bn, &t| {
            bn.iter(|| {
                with_threads(t, || {
                    let e = FourierEngine::new(&z8);
                    black_box(e.sparse_power_sum(3, 3, &[0; 8]).unwrap())
                })
            })
        });
        group.bench_with_input(BenchmarkId::new("triple-dp-z7", &label), &threads, |bn, &t| {
            let f = FunctionTable::zero(7);
            bn.iter(|| with_threads(t, || black_box(count_tuples(&z7, &f, 3, Strategy::TripleDp, &b).unwrap())))
        });
        group.bench_with_input(BenchmarkId::new("outer-sum-z5-d4", &label), &threads, |bn, &t| {
            let f = FunctionTable::zero(5);
            bn.iter(|| with_threads(t, || black_box(count_tuples(&z5, &f, 4, Strategy::OuterSum, &b).unwrap())))
        });
        group.bench_with_input(BenchmarkId::new("transversals-z8-d3", &label), &threads, |bn, &t| {
            let cube = LatinCube::build(&z8, &FunctionTable::identity(&z8), 3).unwrap();
            bn.iter(|| with_threads(t, || black_box(count_transversals(&cube, &b).unwrap())))
        });
        group.bench_with_input(BenchmarkId::new("distance-2^3-m4", &label), &threads, |bn, &t| {
            bn.iter(|| with_threads(t, || black_box(injection_distribution_distance(&k3, 4, &b).unwrap())))
        });
    }
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kplanar_bench::{convex, geometry, regular_geometric};
use kplanar_core::oracle::{exact_best_labeling, exact_survival_expectation};
use kplanar_core::{
    decompose_by_coloring, decompose_lcr, optimal_weights, Drawing, LabelingObjective, SearchConfig, WeightVector,
};
use std::hint::black_box;

fn crossings(c: &mut Criterion) {
    let mut group = c.benchmark_group("from_geometry");
    for n in [20, 40] {
        let (g, coords) = geometry(&convex(n));
        group.bench_with_input(BenchmarkId::new("convex", n), &n, |b, _| {
            b.iter(|| Drawing::from_geometry(g.clone(), coords.clone()).unwrap())
        });
    }
    let (g, coords) = geometry(&regular_geometric(200, 6, 1));
    group.bench_function("regularish-200-6", |b| b.iter(|| Drawing::from_geometry(g.clone(), coords.clone()).unwrap()));
    group.finish();
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose_lcr");
    for n in [12, 20, 30] {
        let d = convex(n);
        let w = optimal_weights(2).unwrap();
        group.bench_with_input(BenchmarkId::new("first-certified", n), &d, |b, d| {
            b.iter(|| decompose_lcr(d, 2, 0.1, &w, &SearchConfig::new(10_000, 7)).unwrap())
        });
    }
    let d = convex(12);
    let w = optimal_weights(2).unwrap();
    group.sample_size(10);
    group.bench_function("best-of-budget-1000/12", |b| {
        b.iter(|| decompose_lcr(&d, 2, 0.05, &w, &SearchConfig::new(1000, 7).best_of_budget()).unwrap())
    });
    group.finish();

    let d = regular_geometric(200, 6, 2);
    c.bench_function("coloring/regularish-200-6", |b| b.iter(|| decompose_by_coloring(black_box(&d)).unwrap()));
}

fn oracles(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let d = convex(10);
    group.bench_function("best-labeling/k10", |b| {
        b.iter(|| exact_best_labeling(&d, 2, LabelingObjective::MaxLoad).unwrap())
    });
    let d = convex(12);
    let w = WeightVector::uniform(3).unwrap();
    group.bench_function("expectation/k12-uniform3", |b| b.iter(|| exact_survival_expectation(&d, &w)));
    group.finish();
}

criterion_group!(benches, crossings, construction, oracles);
criterion_main!(benches);

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ifsx_core::geometry::{hausdorff, renet, CompactSet};
use ifsx_core::hutchinson::attractor;
use ifsx_core::polygonal::approximation_study;
use ifsx_core::verify::{separation_search_with, SearchOptions};
use ifsx_core::witnesses::{build_interval_witness, build_ladder, build_prop_p};
use ifsx_core::{AttractorOptions, ContractiveMap, FunctionSystem};

fn grid(n: usize, shift: f64) -> CompactSet {
    let xs: Vec<f64> = (0..n).map(|i| ((i as f64 + shift) / n as f64).min(1.0)).collect();
    CompactSet::from_scalars(&xs).unwrap()
}

fn cantor() -> FunctionSystem {
    FunctionSystem::new(vec![
        ContractiveMap::affine(1.0 / 3.0, 0.0).unwrap(),
        ContractiveMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
    ])
    .unwrap()
}

fn bench_geometry(c: &mut Criterion) {
    let mut g = c.benchmark_group("hausdorff");
    for n in [1_000, 10_000, 100_000] {
        let (a, b) = (grid(n, 0.0), grid(n, 0.5));
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |bch, _| {
            bch.iter(|| hausdorff(black_box(&a), black_box(&b)).unwrap())
        });
    }
    g.finish();
    let a = grid(100_000, 0.0);
    c.bench_function("renet_1e5_r1e-3", |b| b.iter(|| renet(black_box(&a), 1e-3).unwrap()));
}

fn bench_attractor(c: &mut Criterion) {
    let mut g = c.benchmark_group("attractor_cantor");
    for res in [1e-3, 1e-4, 1e-5] {
        let opts = AttractorOptions::new(1e-6, 1_000_000, res).unwrap();
        let sys = cantor();
        g.bench_with_input(BenchmarkId::from_parameter(res), &res, |b, _| {
            b.iter(|| attractor(black_box(&sys), &opts).unwrap())
        });
    }
    g.finish();
    let weak = FunctionSystem::new(vec![
        ContractiveMap::logistic(),
        ContractiveMap::constant_scalar(0.5).unwrap(),
    ])
    .unwrap();
    let opts = AttractorOptions::default();
    c.bench_function("attractor_weak_logistic", |b| {
        b.iter(|| attractor(black_box(&weak), &opts).unwrap())
    });
    let schedule: Vec<usize> = (0..=6).map(|e| 1 << e).collect();
    let mut g = c.benchmark_group("study");
    g.sample_size(10);
    g.bench_function("logistic_k1_to_64", |b| {
        b.iter(|| approximation_study(black_box(&weak), &schedule, &opts).unwrap())
    });
    g.finish();
}

fn bench_witnesses(c: &mut Criterion) {
    let mut g = c.benchmark_group("witness");
    g.sample_size(10);
    g.bench_function("prop_p_depth4", |b| b.iter(|| build_prop_p(4).unwrap()));
    for n in [2, 3, 4] {
        g.bench_with_input(BenchmarkId::new("ladder", n), &n, |b, &n| {
            b.iter(|| build_ladder(n).unwrap())
        });
    }
    g.bench_function("intervals_depth4", |b| b.iter(|| build_interval_witness(4).unwrap()));
    g.finish();
}

fn bench_search(c: &mut Criterion) {
    let w = build_ladder(2).unwrap();
    let f = w.point_set().unwrap();
    let opts = SearchOptions::default();
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("ladder2_200_trials", |b| {
        b.iter(|| separation_search_with(&f, w.delta_f64(), 2, 200, 42, &opts).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_geometry, bench_attractor, bench_witnesses, bench_search);
criterion_main!(benches);

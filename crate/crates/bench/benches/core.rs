use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use facloc_core::{
    alg_solve, build_metric, derive_seed, normalized_exp_integral, opt_exact, sample_edge_weights,
    stream_from_seed, theorem2_bound, CostProfile, Instance,
};

fn instance(n: usize) -> Instance {
    let w = sample_edge_weights(n, &mut stream_from_seed(derive_seed(1, &[n as u64]))).unwrap();
    Instance::new(build_metric(&w), vec![0.3; n]).unwrap()
}

fn metric(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_metric");
    for n in [12usize, 30, 100] {
        let w = sample_edge_weights(n, &mut stream_from_seed(7)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &w, |b, w| b.iter(|| build_metric(black_box(w))));
    }
    group.finish();
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("opt_exact");
    group.sample_size(20);
    for n in [8usize, 12, 16] {
        let inst = instance(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, i| b.iter(|| opt_exact(black_box(i))));
    }
    group.finish();
    let inst = instance(100);
    c.bench_function("alg_solve/100", |b| b.iter(|| alg_solve(black_box(&inst))));
}

fn bounds(c: &mut Criterion) {
    let costs = CostProfile::equal(0.01, 100).unwrap();
    c.bench_function("theorem2_bound/100", |b| b.iter(|| theorem2_bound(black_box(&costs))));
    c.bench_function("normalized_exp_integral/m=5", |b| {
        b.iter(|| normalized_exp_integral(black_box(3.7), black_box(5)))
    });
}

criterion_group!(benches, metric, solvers, bounds);
criterion_main!(benches);

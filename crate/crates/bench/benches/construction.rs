use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sparse_kfold::{build_filtration, kdp_fast, kdp_simple, min_enclosing_ball, Params};
use sparse_kfold_bench::{uniform_cube, uniform_square};

fn permutation(c: &mut Criterion) {
    let mut group = c.benchmark_group("kdp");
    for n in [500, 2000] {
        let cloud = uniform_square(n, 1);
        group.bench_with_input(BenchmarkId::new("simple", n), &cloud, |b, cloud| {
            b.iter(|| kdp_simple(cloud, 3).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fast", n), &cloud, |b, cloud| {
            b.iter(|| kdp_fast(cloud, 3).unwrap())
        });
    }
    group.finish();
}

fn filtration(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_filtration");
    group.sample_size(10);
    for n in [20, 40] {
        let cloud = uniform_square(n, 2);
        let params = Params::new(2, 1.0, 1, 0).unwrap();
        group.bench_with_input(BenchmarkId::new("k2_eps1_dim1", n), &cloud, |b, cloud| {
            b.iter(|| build_filtration(cloud, params).unwrap())
        });
    }
    group.finish();
}

fn enclosing_ball(c: &mut Criterion) {
    let pts = uniform_cube(200, 3, 3);
    let coords: Vec<&[f64]> = pts.points().iter().map(|p| p.coords()).collect();
    c.bench_function("min_enclosing_ball/200x3", |b| b.iter(|| min_enclosing_ball(&coords).unwrap()));
}

criterion_group!(benches, permutation, filtration, enclosing_ball);
criterion_main!(benches);

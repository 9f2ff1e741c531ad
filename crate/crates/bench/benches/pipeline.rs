use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use planarize::embedding::{estimate_distortion, Backend};
use planarize::generators::{genus_chain, planar_grid, toroidal_grid};
use planarize::{
    all_pairs_distances, caterpillar_decomposition, is_planar, planarizing_path_roots,
    shortest_path_tree,
};

fn planarity(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_planar");
    for side in [10, 30, 60] {
        let grid = planar_grid(side, side).unwrap();
        group.bench_with_input(BenchmarkId::new("grid", side * side), &grid, |b, g| {
            b.iter(|| is_planar(g))
        });
        let torus = toroidal_grid(side, side).unwrap();
        group.bench_with_input(BenchmarkId::new("torus", side * side), &torus, |b, g| {
            b.iter(|| is_planar(g))
        });
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let g = planar_grid(70, 70).unwrap();
    let t = shortest_path_tree(&g, 0).unwrap();
    c.bench_function("caterpillar_decomposition/grid 4900", |b| {
        b.iter(|| caterpillar_decomposition(&t))
    });
}

fn distances(c: &mut Criterion) {
    let g = toroidal_grid(15, 15).unwrap();
    c.bench_function("all_pairs_distances/torus 225", |b| b.iter(|| all_pairs_distances(&g)));
}

fn planarizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("planarizing_path_roots");
    for (name, g) in [
        ("torus 7x7", toroidal_grid(7, 7).unwrap()),
        ("torus 12x12", toroidal_grid(12, 12).unwrap()),
        ("chain g=4", genus_chain(4, 3, 3).unwrap()),
    ] {
        group.bench_function(name, |b| b.iter(|| planarizing_path_roots(&g, 0).unwrap()));
    }
    group.finish();
}

fn distortion(c: &mut Criterion) {
    let g = toroidal_grid(5, 5).unwrap();
    let res = planarizing_path_roots(&g, 0).unwrap();
    let mut group = c.benchmark_group("estimate_distortion/torus 5x5, 20 samples");
    group.sample_size(10);
    for backend in [Backend::Star, Backend::GreedyAugment] {
        group.bench_function(backend.name(), |b| {
            b.iter(|| estimate_distortion(&g, &res, 20, 42, backend).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, planarity, decomposition, distances, planarizer, distortion);
criterion_main!(benches);

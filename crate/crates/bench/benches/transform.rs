use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use herzlab::phitransform::{analyze, random_band_limited, synthesize, Grid, WindowFamily};

fn roundtrip(c: &mut Criterion) {
    let mut group = c.benchmark_group("phi_transform");
    group.sample_size(10);
    for log2_size in [10u32, 12, 14] {
        let grid = Grid::new(64.0, 1 << log2_size).unwrap();
        let w = WindowFamily::build(&grid).unwrap();
        let vmax = grid.max_level();
        let f = random_band_limited(&grid, (vmax as f64).exp2(), 3);
        let field = analyze(&f, &w, vmax).unwrap();
        group.bench_with_input(BenchmarkId::new("analyze", 1u32 << log2_size), &f, |bench, f| {
            bench.iter(|| analyze(black_box(f), &w, vmax).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("synthesize", 1u32 << log2_size),
            &field,
            |bench, field| bench.iter(|| synthesize(black_box(field), &w, &grid).unwrap()),
        );
    }
    group.finish();
}

fn windows(c: &mut Criterion) {
    let grid = Grid::new(64.0, 1 << 14).unwrap();
    c.bench_function("window_family_16384", |bench| {
        bench.iter(|| WindowFamily::build(black_box(&grid)).unwrap())
    });
}

criterion_group!(benches, roundtrip, windows);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use herzlab::embedlab::{estimate_embedding_constant, representative_case, Branch, EnsembleSpec};
use herzlab::herznorm::seq_norm;
use herzlab::{Exponent, HerzParams, SpaceParams};
use herzlab_bench::sample_field;

fn sequence_norms(c: &mut Criterion) {
    let herz = HerzParams::new(0.25, Exponent::from(2.0), Exponent::from(1.0)).unwrap();
    let b = SpaceParams::b(herz, 0.5, Exponent::from(2.0)).unwrap();
    let f = SpaceParams::f(herz, 0.5, Exponent::from(2.0)).unwrap();
    let mut group = c.benchmark_group("sequence_norm");
    for entries in [4, 32, 256] {
        let field = sample_field(10, entries, 11);
        group.bench_with_input(BenchmarkId::new("b", entries), &field, |bench, field| {
            bench.iter(|| seq_norm(black_box(field), &b).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("f", entries), &field, |bench, field| {
            bench.iter(|| seq_norm(black_box(field), &f).unwrap())
        });
    }
    group.finish();
}

fn ensemble(c: &mut Criterion) {
    let case = representative_case(Branch::A).unwrap();
    let spec = EnsembleSpec {
        members: 50,
        ..Default::default()
    };
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(10);
    group.bench_function("branch_a_50", |bench| {
        bench.iter(|| estimate_embedding_constant(&case, black_box(&spec)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, sequence_norms, ensemble);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cutset_core::{cutset_product, exact_g, exact_h, griggs_partition, is_cutset, width, SearchOptions};

fn partitions(c: &mut Criterion) {
    c.bench_function("griggs_partition(12, 7)", |b| {
        b.iter(|| griggs_partition(black_box(12), 7).unwrap())
    });
}

fn analysis(c: &mut Criterion) {
    let cutset = cutset_product(12, 3, 6).unwrap();
    let nodes = cutset.nodes();
    c.bench_function("is_cutset product(12,3,6)", |b| {
        b.iter(|| is_cutset(cutset.lattice(), black_box(&nodes)).unwrap())
    });
    c.bench_function("width product(12,3,6)", |b| {
        b.iter(|| width(black_box(&nodes)).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let opts = SearchOptions::default();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("exact_h(5,1,4)", |b| {
        b.iter(|| exact_h(5, 1, black_box(4), &opts).unwrap())
    });
    group.bench_function("exact_h(7,1,3)", |b| {
        b.iter(|| exact_h(7, 1, black_box(3), &opts).unwrap())
    });
    group.bench_function("exact_g(6,2,4)", |b| {
        b.iter(|| exact_g(6, 2, black_box(4), &opts).unwrap())
    });
    group.finish();
}

criterion_group!(benches, partitions, analysis, search);
criterion_main!(benches);

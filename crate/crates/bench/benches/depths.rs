use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tukey_bench::fixture;
use tukey_core::{
    affine_depth, convex_depth, realize, sweep_depth_oracle_2d, tukey_depth, CandidateHistogram,
    DepthMode, DepthQuery, FlatSpec,
};

fn bench_point_depth(c: &mut Criterion) {
    let planar = fixture(10, 2, 1);
    let spatial = fixture(9, 3, 2);
    c.bench_function("tukey_depth/planar n=10", |b| {
        b.iter(|| {
            for i in 0..planar.len() {
                black_box(tukey_depth(black_box(&planar), i).unwrap());
            }
        })
    });
    c.bench_function("tukey_depth/spatial n=9", |b| {
        b.iter(|| {
            for i in 0..spatial.len() {
                black_box(tukey_depth(black_box(&spatial), i).unwrap());
            }
        })
    });
    c.bench_function("sweep_oracle/planar n=10", |b| {
        b.iter(|| {
            for i in 0..planar.len() {
                black_box(
                    sweep_depth_oracle_2d(black_box(&planar), &DepthQuery::Point(i), DepthMode::Affine)
                        .unwrap(),
                );
            }
        })
    });
}

fn bench_flat_depth(c: &mut Criterion) {
    let planar = fixture(10, 2, 3);
    let spatial = fixture(8, 3, 4);
    let pair = FlatSpec::new(vec![0, 1]).unwrap();
    c.bench_function("affine_depth/planar pair", |b| {
        b.iter(|| black_box(affine_depth(black_box(&planar), &pair).unwrap()))
    });
    c.bench_function("convex_depth/planar pair", |b| {
        b.iter(|| black_box(convex_depth(black_box(&planar), &pair).unwrap()))
    });
    c.bench_function("affine_depth/spatial pair", |b| {
        b.iter(|| black_box(affine_depth(black_box(&spatial), &pair).unwrap()))
    });
}

fn bench_realize(c: &mut Criterion) {
    let hist = CandidateHistogram::new(vec![4, 3, 2], 2);
    c.bench_function("realize/[4,3,2] d=2", |b| {
        b.iter(|| black_box(realize(black_box(&hist), 11).unwrap()))
    });
}

criterion_group!(benches, bench_point_depth, bench_flat_depth, bench_realize);
criterion_main!(benches);

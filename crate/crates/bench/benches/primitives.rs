//! Micro-benchmarks for the hot primitives: subset sampling, Stoer–Wagner,
//! the private median, and a sparsifier refresh. Operation-count claims live
//! in the test suites; these exist for spotting performance regressions
//! while developing.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use robustdyn::dp::{build_grid, private_median, MedianConfig};
use robustdyn::graph::min_cut_exact;
use robustdyn::rng::rng_from_seed;
use robustdyn::sparsify::{decompose, sparsify, subset_sample, SparsifyConfig};
use robustdyn_bench::clique;
use std::hint::black_box;

fn bench_subset_sample(c: &mut Criterion) {
    c.bench_function("subset_sample_n10000_p01", |b| {
        let mut rng = rng_from_seed(1);
        let mut touches = 0u64;
        b.iter(|| black_box(subset_sample(10_000, 0.1, &mut rng, &mut touches)));
    });
}

fn bench_stoer_wagner(c: &mut Criterion) {
    let g = clique(60);
    c.bench_function("min_cut_exact_k60", |b| {
        b.iter(|| black_box(min_cut_exact(&g).unwrap().0));
    });
}

fn bench_private_median(c: &mut Criterion) {
    let grid = build_grid(1400.0, 0.15).unwrap();
    let cfg = MedianConfig::derive(0.5, 1e-4, grid.len()).unwrap();
    let sample: Vec<f64> = (0..80).map(|i| grid.points()[60 + (i % 5)]).collect();
    c.bench_function("private_median_s80", |b| {
        let mut rng = rng_from_seed(2);
        b.iter(|| black_box(private_median(&sample, &grid, &cfg, &mut rng).unwrap()));
    });
}

fn bench_refresh(c: &mut Criterion) {
    let g = clique(60);
    let cfg = SparsifyConfig { phi: 0.3, sample_const: 0.02, eps: 0.5, ..Default::default() };
    let d = decompose(&g, cfg);
    c.bench_function("sparsify_refresh_k60", |b| {
        let mut seed = 0u64;
        b.iter_batched(
            || {
                seed += 1;
                seed
            },
            |s| black_box(sparsify(&d, 1000, s)),
            BatchSize::SmallInput,
        );
    });
}

criterion_group!(benches, bench_subset_sample, bench_stoer_wagner, bench_private_median, bench_refresh);
criterion_main!(benches);

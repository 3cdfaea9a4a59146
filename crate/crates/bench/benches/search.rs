// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use edfkit::{strongly_optimal_search, SearchOptions};
use edfkit_bench::SEARCH_INSTANCES;
use std::hint::black_box;

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("strongly_optimal_search");
    group.sample_size(10);
    for (n, m, a) in SEARCH_INSTANCES {
        for unit_reduction in [false, true] {
            let id = format!("({n},{m},{a}) units={unit_reduction}");
            let opts = SearchOptions {
                unit_reduction,
                ..SearchOptions::default()
            };
            group.bench_function(BenchmarkId::from_parameter(id), |b| {
                b.iter(|| strongly_optimal_search(black_box(n), m, a, opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);

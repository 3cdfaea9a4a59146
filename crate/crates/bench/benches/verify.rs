// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use edfkit::{classify_bswedf, rho_profile};
use edfkit_bench::construction_families;
use std::hint::black_box;

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_bswedf");
    for (name, family) in construction_families() {
        group.bench_with_input(BenchmarkId::from_parameter(&name), &family, |b, f| {
            b.iter(|| classify_bswedf(black_box(f)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("rho_profile");
    for (name, family) in construction_families() {
        group.bench_with_input(BenchmarkId::from_parameter(&name), &family, |b, f| {
            b.iter(|| rho_profile(black_box(f)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, verify);
criterion_main!(benches);

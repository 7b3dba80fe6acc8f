use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use robinstar::secular::{d_compact, d_det, d_sum, d_with_derivative};
use robinstar_bench::{robin_tuple, sample_points};

fn forms(c: &mut Criterion) {
    let points = sample_points(64);
    let mut group = c.benchmark_group("secular");
    for n in [2usize, 4, 8, 16] {
        let h = robin_tuple(n);
        group.bench_with_input(BenchmarkId::new("sum", n), &h, |b, h| {
            b.iter(|| {
                points
                    .iter()
                    .map(|&z| d_sum(h, black_box(z)))
                    .sum::<num_complex::Complex64>()
            })
        });
        group.bench_with_input(BenchmarkId::new("det", n), &h, |b, h| {
            b.iter(|| {
                points
                    .iter()
                    .map(|&z| d_det(h, black_box(z)))
                    .sum::<num_complex::Complex64>()
            })
        });
        group.bench_with_input(BenchmarkId::new("compact", n), &h, |b, h| {
            b.iter(|| {
                points
                    .iter()
                    .map(|&z| d_compact(h, black_box(z)).unwrap())
                    .sum::<num_complex::Complex64>()
            })
        });
        group.bench_with_input(BenchmarkId::new("with_derivative", n), &h, |b, h| {
            b.iter(|| {
                points
                    .iter()
                    .map(|&z| d_with_derivative(h, black_box(z)).1)
                    .sum::<num_complex::Complex64>()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, forms);
criterion_main!(benches);

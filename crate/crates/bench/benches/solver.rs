use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use robinstar::asymptotics::{series_deviation, solve_series_root};
use robinstar::spectral::{spectrum, SearchRegion};
use robinstar_bench::robin_tuple;

fn windows(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    for re_max in [10.0, 40.0] {
        let region = SearchRegion::window(0.1, re_max, 2.0).unwrap();
        for n in [3usize, 6] {
            let h = robin_tuple(n);
            group.bench_with_input(
                BenchmarkId::new(format!("N{n}"), re_max),
                &region,
                |b, r| b.iter(|| spectrum(&h, black_box(r), 1e-12).unwrap()),
            );
        }
    }
    group.finish();
}

fn series_roots(c: &mut Criterion) {
    let h = robin_tuple(4);
    c.bench_function("series_root_solver_n200", |b| {
        b.iter(|| solve_series_root(&h, black_box(200), 1e-12).unwrap())
    });
    c.bench_function("series_deviation_n200", |b| {
        b.iter(|| series_deviation(&h, black_box(200)).unwrap())
    });
}

criterion_group!(benches, windows, series_roots);
criterion_main!(benches);

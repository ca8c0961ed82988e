use std::hint::black_box;

use cartier::tables::split_table;
use cartier::ttv::odd_model_polynomial;
use cartier::{bipoly_pow_truncated, scan_family, Exec, Sign};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn power(c: &mut Criterion) {
    let mut group = c.benchmark_group("bipoly_pow_truncated");
    group.sample_size(10);
    for p in [101u64, 199, 439] {
        let f = odd_model_polynomial(Sign::Minus, p).unwrap();
        let cap = Some(2 * p as usize);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, p), &p, |b, &p| {
                b.iter(|| bipoly_pow_truncated(black_box(&f), (p - 1) / 2, cap, exec))
            });
        }
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_family");
    group.sample_size(10);
    for p in [199u64, 439] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, p), &p, |b, &p| {
                b.iter(|| scan_family(Sign::Plus, black_box(p), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let mut group = c.benchmark_group("split_table");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 199), |b| {
            b.iter(|| split_table(black_box(199), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, power, scan, table);
criterion_main!(benches);

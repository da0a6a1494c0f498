use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exmatch_bench::{certified, hashed};
use expander_match::certify::{certify_bounded_degree, DEFAULT_BUDGET};
use expander_match::{Matcher, Mode, OneProbeStore, OnlineMatcher};

fn certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify_bounded_degree");
    for n in [8, 12, 16] {
        let (g, _) = certified(n, 256, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| certify_bounded_degree(black_box(g), 3, 1, DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn assign(c: &mut Criterion) {
    let (g, params) = certified(16, 256, 4);
    let m = Matcher::new(&g, params);
    let list = [3, 11, 7, 0];
    c.bench_function("assign/base", |b| {
        b.iter(|| m.assign(black_box(&list), 0).unwrap())
    });

    let h = hashed(16, 256, 4);
    c.bench_function("assign/hashed", |b| {
        b.iter(|| h.assign_slots(black_box(&list), 0).unwrap())
    });
}

fn store(c: &mut Criterion) {
    let h = hashed(16, 256, 4);
    let degree = h.degree();
    let s = OneProbeStore::new(h, 3, Mode::Dynamic).unwrap();
    s.insert(5).unwrap();
    s.insert(9).unwrap();
    let mut probe = 0;
    c.bench_function("store/query", |b| {
        b.iter(|| {
            probe = (probe + 1) % degree;
            s.query(black_box(9), probe).unwrap()
        })
    });
    c.bench_function("store/insert_delete", |b| {
        b.iter(|| {
            s.insert(black_box(2)).unwrap();
            s.delete(2).unwrap();
        })
    });
}

criterion_group!(benches, certify, assign, store);
criterion_main!(benches);

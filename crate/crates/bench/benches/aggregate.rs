use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pairrank_bench::{scores, wins};
use pairrank_core::aggregate::{aggregate, bt_fit, AggregateConfig};
use pairrank_core::{BtConfig, Mechanism};

fn bench_bt_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("bt_fit");
    for k in [5, 10, 25, 50] {
        let w = wins(k, 200, 42);
        group.bench_with_input(BenchmarkId::from_parameter(k), &w, |b, w| {
            b.iter(|| bt_fit(black_box(w), &BtConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_mechanisms(c: &mut Criterion) {
    let m = scores(10, 200, 7);
    let cfg = AggregateConfig::default();
    let mut group = c.benchmark_group("aggregate_10x200");
    for mech in Mechanism::ALL {
        group.bench_function(mech.name(), |b| b.iter(|| aggregate(black_box(&m), mech, &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_bt_fit, bench_mechanisms);
criterion_main!(benches);

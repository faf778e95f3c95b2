use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use padicf::cf::{expand, Flavor};
use padicf::constructor::{
    beta, construct, is_nice, nice_search_all, ConstructOptions, Pool, SearchLimits, SearchSpace,
};
use padicf::padic::{discrete_log, mult_order, PadicSqrt, DEFAULT_DLOG_BUDGET};
use padicf_bench::{certificate, open_root, period_twelve, prime};

fn expansion(c: &mut Criterion) {
    let periodic = period_twelve();
    c.bench_function("expand/period 12", |b| {
        b.iter(|| expand(black_box(&periodic), Flavor::Browkin, 1000))
    });
    let open = open_root();
    let mut g = c.benchmark_group("expand/open");
    for steps in [100usize, 1000] {
        g.bench_with_input(BenchmarkId::from_parameter(steps), &steps, |b, &n| {
            b.iter(|| expand(black_box(&open), Flavor::Browkin, n))
        });
    }
    g.finish();
}

fn padic(c: &mut Criterion) {
    let p = prime(5);
    let delta = BigInt::from(89);
    let mut g = c.benchmark_group("sqrt digits");
    for n in [100u64, 1000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| PadicSqrt::with_cap(black_box(&delta), 3, &p, n).and_then(|r| r.digits(n)))
        });
    }
    g.finish();
    let m = BigInt::from(353 * 353);
    c.bench_function("mult_order 3 mod 353²", |b| {
        b.iter(|| mult_order(&3.into(), black_box(&m)))
    });
    c.bench_function("discrete_log 110 base 3 mod 353²", |b| {
        b.iter(|| discrete_log(&3.into(), black_box(&110.into()), &m, DEFAULT_DLOG_BUDGET))
    });
}

fn constructions(c: &mut Criterion) {
    let opts = ConstructOptions::default();
    let six_fifths = certificate("6/5", 5);
    let mut g = c.benchmark_group("construct [6/5]");
    for h in 0..3u64 {
        g.bench_with_input(BenchmarkId::from_parameter(h), &h, |b, &h| {
            b.iter(|| construct(&six_fifths, h, &opts))
        });
    }
    g.finish();
    let thirds = certificate("1/3, 1/3", 3);
    c.bench_function("construct [1/3, 1/3]", |b| {
        b.iter(|| construct(&thirds, 0, &opts))
    });

    let p = prime(5);
    let seq = beta(3, 1, &p).expect("β");
    c.bench_function("is_nice β_3", |b| {
        b.iter(|| is_nice(black_box(&seq), &p, DEFAULT_DLOG_BUDGET))
    });
    let space = SearchSpace::uniform(
        &p,
        2,
        &Pool::Positive {
            num_bound: 12,
            max_exp: 1,
        },
    )
    .expect("space");
    c.bench_function("nice_search p=5 t=2", |b| {
        b.iter(|| nice_search_all(&space, &SearchLimits::default()))
    });
}

criterion_group!(benches, expansion, padic, constructions);
criterion_main!(benches);

//! Benchmarks for the data-parallel inner loops. Run once with the default
//! features (rayon) and once with `--no-default-features` to compare the
//! parallel and sequential paths; the bench names carry the active mode so
//! criterion keeps the two result sets side by side.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use increments_core::laws::{forward_map, invert_map, random_partially_exchangeable_law};
use increments_core::models::{crp_law, sample_crp_many, CrpParameter};
use increments_core::Rational;
use num::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn bench_forward_map(c: &mut Criterion) {
    let theta = CrpParameter::theta(Rational::new(BigInt::from(3), BigInt::from(2))).unwrap();
    let p = crp_law(9, &theta).unwrap();
    c.bench_function(&format!("forward_map/n=9/{MODE}"), |b| {
        b.iter(|| black_box(forward_map(black_box(&p))))
    });
}

fn bench_roundtrip(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = random_partially_exchangeable_law(7, &mut rng).unwrap();
    c.bench_function(&format!("forward_then_invert/n=7/{MODE}"), |b| {
        b.iter(|| {
            let q = forward_map(black_box(&p));
            black_box(invert_map(&q))
        })
    });
}

fn bench_sampling(c: &mut Criterion) {
    let theta = CrpParameter::theta(Rational::from_integer(BigInt::from(1))).unwrap();
    c.bench_function(&format!("sample_crp_many/n=50/count=10000/{MODE}"), |b| {
        b.iter(|| black_box(sample_crp_many(50, &theta, 7, 10_000)))
    });
}

criterion_group!(benches, bench_forward_map, bench_roundtrip, bench_sampling);
criterion_main!(benches);

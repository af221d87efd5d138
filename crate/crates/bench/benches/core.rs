use std::hint::black_box;

use cfpow::bounds::{theorem_ham_bound, theorem_y_bound};
use cfpow::cfrac::{binet_data, denominators, ContinuedFraction};
use cfpow::numeration::{ostrowski_encode, zeckendorf_encode};
use cfpow::search::{enumerate_solutions, is_perfect_power, SearchRange};
use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

fn golden() -> ContinuedFraction {
    ContinuedFraction::from_u64s(0, &[], &[1]).unwrap()
}

fn sqrt2() -> ContinuedFraction {
    ContinuedFraction::from_u64s(1, &[], &[2]).unwrap()
}

fn arithmetic(c: &mut Criterion) {
    let cf = sqrt2();
    c.bench_function("denominators_500", |b| b.iter(|| denominators(black_box(&cf), 500)));
    c.bench_function("binet_data_sqrt2", |b| b.iter(|| binet_data(black_box(&cf), 128).unwrap()));
    let n = BigInt::from(123_456_789_012u64);
    c.bench_function("ostrowski_encode", |b| b.iter(|| ostrowski_encode(black_box(&n), &cf)));
    c.bench_function("zeckendorf_encode", |b| b.iter(|| zeckendorf_encode(black_box(&n))));
    let p = BigInt::from(3864u32).pow(6);
    c.bench_function("is_perfect_power", |b| b.iter(|| is_perfect_power(black_box(&p))));
}

fn pipelines(c: &mut Criterion) {
    let bd = binet_data(&sqrt2(), 128).unwrap();
    c.bench_function("theorem_y_bound", |b| b.iter(|| theorem_y_bound(&bd, 2, &BigInt::from(10), 128).unwrap()));
    c.bench_function("theorem_ham_bound", |b| b.iter(|| theorem_ham_bound(&bd, 2, 2, 128).unwrap()));
}

fn search(c: &mut Criterion) {
    let cf = golden();
    let range = SearchRange::new(2, 40, 5).unwrap();
    c.bench_function("search_golden_k2_n40", |b| b.iter(|| enumerate_solutions(&cf, black_box(&range)).unwrap()));
    let range3 = SearchRange::new(3, 40, 5).unwrap();
    c.bench_function("search_golden_k3_n40", |b| b.iter(|| enumerate_solutions(&cf, black_box(&range3)).unwrap()));
}

criterion_group!(benches, arithmetic, pipelines, search);
criterion_main!(benches);

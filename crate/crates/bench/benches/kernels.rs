use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use inclex_bench::{boolean, curve, divisors};
use inclex_core::cohom::koszul_inverse_check;
use inclex_core::ffield::{count_smooth_sections_p1, count_squarefree_monic};
use inclex_core::homology::rank_e1_report;
use inclex_core::incidence::{mobius_by_inversion, mobius_topological};
use inclex_core::zerocycles::skeletal_compare;
use inclex_core::BigInt;

fn mobius(c: &mut Criterion) {
    let mut g = c.benchmark_group("mobius");
    for n in [3, 4, 5] {
        let p = boolean(n);
        g.bench_with_input(BenchmarkId::new("inversion", n), &p, |b, p| b.iter(|| mobius_by_inversion::<BigInt>(black_box(p))));
        g.bench_with_input(BenchmarkId::new("topological", n), &p, |b, p| b.iter(|| mobius_topological(black_box(p))));
    }
    g.finish();
}

fn rank_ss(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank_ss");
    g.sample_size(20);
    for n in [60u64, 360] {
        let p = divisors(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| b.iter(|| rank_e1_report(black_box(p)).unwrap()));
    }
    g.finish();
}

fn koszul(c: &mut Criterion) {
    let mut g = c.benchmark_group("koszul");
    for genus in [1, 3] {
        let v = curve(genus);
        g.bench_with_input(BenchmarkId::from_parameter(genus), &v, |b, v| b.iter(|| koszul_inverse_check(black_box(v), 8)));
    }
    g.finish();
}

fn skeletal(c: &mut Criterion) {
    let mut g = c.benchmark_group("skeletal_compare");
    g.sample_size(10);
    g.bench_function("2x4", |b| b.iter(|| skeletal_compare(black_box(2), black_box(4)).unwrap()));
    g.finish();
}

fn counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("ffield");
    g.sample_size(10);
    g.bench_function("squarefree q=3 d=8", |b| b.iter(|| count_squarefree_monic(black_box(3), black_box(8)).unwrap()));
    g.bench_function("smooth_p1 q=2 d=10", |b| b.iter(|| count_smooth_sections_p1(black_box(2), black_box(10)).unwrap()));
    g.finish();
}

criterion_group!(benches, mobius, rank_ss, koszul, skeletal, counts);
criterion_main!(benches);

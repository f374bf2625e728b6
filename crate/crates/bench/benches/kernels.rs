use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use distmul::*;

fn mollifier(c: &mut Criterion) {
    let phi = Mollifier::new(6).unwrap();
    let mut g = c.benchmark_group("mollifier");
    for r in [0usize, 2, 4] {
        g.bench_with_input(BenchmarkId::new("eval", r), &r, |b, &r| {
            b.iter(|| phi.eval(black_box(0.37), r).unwrap())
        });
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("delta_red");
    for k in [0u32, 2, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| delta_red(k, black_box(0.3), black_box(1e-3)).unwrap())
        });
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    c.bench_function("adaptive_quad/sqrt", |b| {
        b.iter(|| {
            QuadConfig::with_tols(1e-12, 1e-12)
                .integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, &[0.0])
                .unwrap()
                .value
        })
    });
}

fn products(c: &mut Criterion) {
    let phi = Arc::new(Mollifier::new(6).unwrap());
    let mut g = c.benchmark_group("product_term");
    g.sample_size(20);
    for (l, k) in [(0u32, 0u32), (1, 1), (2, 2)] {
        let q = ProductQuery::deltas(
            l,
            k,
            critical_alpha(l, k, 1.0),
            1.0,
            phi.clone(),
            TestFunction::standard(),
        )
        .unwrap();
        for n in [16u64, 1024] {
            g.bench_with_input(BenchmarkId::new(format!("{l}{k}"), n), &n, |b, &n| {
                b.iter(|| product_term(&q, n).unwrap())
            });
        }
    }
    g.finish();
    let q = ProductQuery::deltas(0, 0, 2.0, 1.0, phi, TestFunction::standard()).unwrap();
    c.bench_function("product_limit/00", |b| {
        b.iter(|| product_limit(&q, Schedule::default(), 1e-4).unwrap().value)
    });
}

criterion_group!(benches, mollifier, kernels, quadrature, products);
criterion_main!(benches);

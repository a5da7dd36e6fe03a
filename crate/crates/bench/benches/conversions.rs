use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qfactor_bench::{fibonacci_exponents, fibonacci_series, rational_series};
use qfactor_core::convert::{a_from_r_direct, a_from_r_recursive, r_from_a_direct, r_from_a_recursive};
use qfactor_core::qseries::gaussian_binomial;
use qfactor_core::series::{
    product_from_exponents, reciprocal_convolution, reciprocal_partition_formula,
};
use qfactor_core::SizeGuard;

fn series_from_exponents(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_from_exponents");
    for order in [10usize, 15, 20] {
        let a = fibonacci_exponents(order);
        group.bench_with_input(BenchmarkId::new("recursive", order), &a, |b, a| {
            b.iter(|| r_from_a_recursive(a))
        });
        group.bench_with_input(BenchmarkId::new("direct", order), &a, |b, a| {
            b.iter(|| r_from_a_direct(a, SizeGuard::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("product", order), &a, |b, a| {
            b.iter(|| product_from_exponents(a))
        });
    }
    group.finish();
}

fn exponents_from_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("exponents_from_series");
    for order in [10usize, 15, 20] {
        let s = fibonacci_series(order);
        group.bench_with_input(BenchmarkId::new("recursive", order), &s, |b, s| {
            b.iter(|| a_from_r_recursive(s).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("direct", order), &s, |b, s| {
            b.iter(|| a_from_r_direct(s, SizeGuard::default()).unwrap())
        });
    }
    group.finish();
}

fn reciprocal(c: &mut Criterion) {
    let mut group = c.benchmark_group("reciprocal");
    for order in [10usize, 15, 20] {
        let s = rational_series(order);
        group.bench_with_input(BenchmarkId::new("convolution", order), &s, |b, s| {
            b.iter(|| reciprocal_convolution(s).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("partition_formula", order), &s, |b, s| {
            b.iter(|| reciprocal_partition_formula(s, SizeGuard::default()).unwrap())
        });
    }
    group.finish();
}

fn gaussian(c: &mut Criterion) {
    c.bench_function("gaussian_binomial 20 choose 10", |b| {
        b.iter(|| gaussian_binomial(20, 10).unwrap())
    });
}

criterion_group!(
    benches,
    series_from_exponents,
    exponents_from_series,
    reciprocal,
    gaussian
);
criterion_main!(benches);

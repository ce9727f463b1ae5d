use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use potentialkit::quadrature::primitive::LogPrimitive;
use potentialkit::quadrature::{radial_log_kernel, radial_log_kernel_limit, RadialKernelQuery};
use potentialkit::specfun::{bessel_j, kernel_k};
use potentialkit::KernelOrder;

fn special_functions(c: &mut Criterion) {
    let n2 = KernelOrder::new(2).unwrap();
    let n3 = KernelOrder::new(3).unwrap();
    let ts: Vec<f64> = (0..256).map(|i| 0.17 * i as f64).collect();
    c.bench_function("bessel_j0 x256", |b| {
        b.iter(|| ts.iter().map(|&t| bessel_j(0, black_box(t)).unwrap()).sum::<f64>())
    });
    c.bench_function("kernel_k n=2 x256", |b| b.iter(|| ts.iter().map(|&t| kernel_k(n2, black_box(t))).sum::<f64>()));
    c.bench_function("kernel_k n=3 x256", |b| b.iter(|| ts.iter().map(|&t| kernel_k(n3, black_box(t))).sum::<f64>()));
}

fn primitive(c: &mut Criterion) {
    let p = LogPrimitive::get(KernelOrder::new(2).unwrap());
    let xs: Vec<f64> = (0..256).map(|i| 1.5f64.powi(i % 40) * 0.01).collect();
    c.bench_function("log primitive x256", |b| b.iter(|| xs.iter().map(|&x| p.eval(black_box(x))).sum::<f64>()));
}

fn radial(c: &mut Criterion) {
    let n = KernelOrder::new(2).unwrap();
    let q = RadialKernelQuery::new(n, 0.3, 1e-6, 1e4).unwrap();
    c.bench_function("radial_log_kernel", |b| b.iter(|| radial_log_kernel(black_box(&q))));
    c.bench_function("radial_log_kernel_limit", |b| {
        b.iter(|| radial_log_kernel_limit(n, black_box(0.3), 1e-8).unwrap())
    });
}

criterion_group!(benches, special_functions, primitive, radial);
criterion_main!(benches);

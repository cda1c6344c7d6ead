use std::hint::black_box;

use conetorus::detformula::{det_value, tau_bergman, variational_residual};
use conetorus::moduli::sigma_from_t;
use conetorus::specialfn::{ln_dedekind_eta, theta, PeriodRatio, ThetaCharacteristic};
use conetorus_bench::sample_moduli;
use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

fn special_functions(c: &mut Criterion) {
    let sigma = PeriodRatio::new(Complex64::new(0.2, 1.1)).unwrap();
    let ch = ThetaCharacteristic::new(1, 1).unwrap();
    let z = Complex64::new(0.31, 0.17);
    c.bench_function("theta_11", |b| b.iter(|| theta(ch, black_box(z), black_box(&sigma)).unwrap()));
    // Far from the fundamental domain, so the reduction is part of the cost.
    let far = PeriodRatio::new(Complex64::new(7.3, 0.01)).unwrap();
    c.bench_function("ln_eta_reduced", |b| b.iter(|| ln_dedekind_eta(black_box(&far)).unwrap()));
}

fn moduli_maps(c: &mut Criterion) {
    let points = sample_moduli();
    c.bench_function("sigma_from_t x6", |b| {
        b.iter(|| points.iter().map(|t| sigma_from_t(black_box(t)).unwrap().im()).sum::<f64>())
    });
    c.bench_function("det_value x6", |b| {
        b.iter(|| points.iter().map(|t| det_value(black_box(t)).unwrap().log_value).sum::<f64>())
    });
    c.bench_function("tau_bergman", |b| b.iter(|| tau_bergman(black_box(&points[0])).unwrap()));
}

fn variational(c: &mut Criterion) {
    let t = sample_moduli()[3];
    c.bench_function("variational_residual", |b| b.iter(|| variational_residual(black_box(&t)).unwrap()));
}

criterion_group!(benches, special_functions, moduli_maps, variational);
criterion_main!(benches);

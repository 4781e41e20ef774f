use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entlab_core::bounds::{threshold_alpha, threshold_n, BoundCurve};
use entlab_core::dense::{self, apply_circuit, thermal_density};
use entlab_core::durcirac::{bell_eigenvalues, ephi_average, split_extremes};
use entlab_core::majorization::{majorizes, SpectrumVector};
use entlab_core::spectral::negativity_one_split;
use entlab_core::{BellCircuit, BipartiteSplit, EpsilonMode, ThermalSpec};

fn negativity(c: &mut Criterion) {
    let mut g = c.benchmark_group("negativity_one_split");
    for n in [10u64, 100, 500] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| negativity_one_split(black_box(n), black_box(0.01)).unwrap())
        });
    }
    g.finish();
}

fn thresholds(c: &mut Criterion) {
    c.bench_function("threshold_n/uch_one_split", |b| {
        b.iter(|| {
            threshold_n(BoundCurve::UchOneSplit, black_box(4e-5), EpsilonMode::Exact).unwrap()
        })
    });
    c.bench_function("threshold_n/effpure_approximate", |b| {
        b.iter(|| {
            threshold_n(
                BoundCurve::DurciracEffpure,
                black_box(4e-5),
                EpsilonMode::Approximate,
            )
            .unwrap()
        })
    });
    c.bench_function("threshold_alpha/cf_fullsep", |b| {
        b.iter(|| {
            threshold_alpha(BoundCurve::CfFullsep, black_box(20), EpsilonMode::Exact).unwrap()
        })
    });
}

fn dense_oracle(c: &mut Criterion) {
    let n = 8;
    let rho = apply_circuit(
        &thermal_density(&ThermalSpec::new(n, 0.3).unwrap()).unwrap(),
        &BellCircuit::ch(n),
    )
    .unwrap();
    let split = BipartiteSplit::half(n).unwrap();
    c.bench_function("dense/partial_transpose_spectrum_n8", |b| {
        b.iter(|| dense::partial_transpose_spectrum(black_box(&rho), &split).unwrap())
    });
}

fn closed_form(c: &mut Criterion) {
    let spec = ThermalSpec::new(1_000_000, 1e-5).unwrap();
    let state = ephi_average(&bell_eigenvalues(&spec, &BellCircuit::ch_fan(1_000_000)).unwrap());
    c.bench_function("durcirac/split_extremes_n1e6", |b| {
        b.iter(|| split_extremes(black_box(&state)))
    });
}

fn majorization(c: &mut Criterion) {
    let d = 1 << 12;
    let raw: Vec<f64> = (0..d).map(|i| ((i * 7919) % d + 1) as f64).collect();
    let total: f64 = raw.iter().sum();
    let s = SpectrumVector::new(raw.iter().map(|x| x / total).collect()).unwrap();
    let r = SpectrumVector::new(vec![1.0 / d as f64; d]).unwrap();
    c.bench_function("majorizes/4096", |b| {
        b.iter(|| majorizes(black_box(&s), black_box(&r)).unwrap())
    });
}

criterion_group!(
    benches,
    negativity,
    thresholds,
    dense_oracle,
    closed_form,
    majorization
);
criterion_main!(benches);

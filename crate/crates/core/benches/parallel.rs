use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use tm_core::entropy::{Extrapolation, Resummation};
use tm_core::measure::fourier_coeffs_with;
use tm_core::potential::argmax_on_midpoints_with;
use tm_core::pressure::{CylinderSupTable, MidpointTable};
use tm_core::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn midpoint_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("midpoint_table");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 20), &20u32, |b, &n| {
            b.iter(|| MidpointTable::build_with(black_box(n), exec).unwrap())
        });
    }
    group.finish();
}

fn pressure_curve(c: &mut Criterion) {
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.4).collect();
    let mut group = c.benchmark_group("pressure_curve");
    group.sample_size(10);
    for (name, exec) in MODES {
        let table = MidpointTable::build_with(20, exec).unwrap();
        group.bench_function(BenchmarkId::new(name, 20), |b| {
            b.iter(|| table.curve(black_box(&grid)).unwrap())
        });
    }
    group.finish();
}

fn argmax_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("argmax_scan");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 20), &20u32, |b, &n| {
            b.iter(|| argmax_on_midpoints_with(black_box(n), exec).unwrap())
        });
    }
    group.finish();
}

fn fourier(c: &mut Criterion) {
    let mut group = c.benchmark_group("fourier_coeffs");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 20), &20u32, |b, &n| {
            b.iter(|| fourier_coeffs_with(black_box(n), exec).unwrap())
        });
    }
    group.finish();
}

fn cylinder_sup(c: &mut Criterion) {
    let mut group = c.benchmark_group("cylinder_sup_table");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 12), &12u32, |b, &n| {
            b.iter(|| CylinderSupTable::build_with(black_box(n), exec).unwrap())
        });
    }
    group.finish();
}

fn entropy(c: &mut Criterion) {
    let mut group = c.benchmark_group("entropy_series");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("extrapolated", name), |b| {
            b.iter(|| Extrapolation::default().series_sum(exec))
        });
        group.bench_function(BenchmarkId::new("resummed", name), |b| {
            b.iter(|| Resummation::default().series_sum(exec))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    midpoint_table,
    pressure_curve,
    argmax_scan,
    fourier,
    cylinder_sup,
    entropy
);
criterion_main!(benches);

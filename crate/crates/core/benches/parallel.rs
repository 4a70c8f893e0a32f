//! Single-thread pool versus the default pool on the data-parallel paths.
//! Build with `--no-default-features` to time the plain sequential code.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qwitness::qstate::random_density;
use qwitness::su2::default_grid;
use qwitness::tomography::{build_reconstruction_map, reconstruct, tomogram_sample};
use qwitness::witness::{max_witness_scan, qutrit_scan};
use qwitness::Spin;
use rayon::ThreadPoolBuilder;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("1-thread", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("scans");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("qutrit_scan", name), |b| {
            b.iter(|| pool.install(|| qutrit_scan(0.01).unwrap()))
        });
        group.bench_function(BenchmarkId::new("max_witness_scan", name), |b| {
            b.iter(|| pool.install(|| max_witness_scan(20, 0).unwrap()))
        });
    }
    group.finish();
}

fn tomography(c: &mut Criterion) {
    let spin = Spin::from_twice(5);
    let grid = Arc::new(default_grid(spin));
    let rho = random_density(spin.dim(), 1);
    let map = build_reconstruction_map(&grid).unwrap();
    let t = tomogram_sample(&rho, &grid).unwrap();

    let mut group = c.benchmark_group("tomography");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("sample_j5/2", name), |b| {
            b.iter(|| pool.install(|| tomogram_sample(&rho, &grid).unwrap()))
        });
        group.bench_function(BenchmarkId::new("kernel_j5/2", name), |b| {
            b.iter(|| pool.install(|| build_reconstruction_map(&grid).unwrap()))
        });
        group.bench_function(BenchmarkId::new("reconstruct_j5/2", name), |b| {
            b.iter(|| pool.install(|| reconstruct(&t, &map).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, scans, tomography);
criterion_main!(benches);

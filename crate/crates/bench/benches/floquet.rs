use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tongues_bench::in_gap_points;
use tongues_core::delta_kick::{lambda_required, solve_delta};
use tongues_core::finite_kick::{mismatch, ShootingProblem};
use tongues_core::floquet::{gap_edges, monodromy, stability_chart};
use tongues_core::KickSpec;

fn period_map(c: &mut Criterion) {
    let mut group = c.benchmark_group("monodromy");
    for (n, params) in in_gap_points() {
        group.bench_with_input(BenchmarkId::from_parameter(n), &params, |b, p| {
            b.iter(|| monodromy(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn strengths(c: &mut Criterion) {
    let mut group = c.benchmark_group("lambda_required");
    for (n, params) in in_gap_points() {
        group.bench_with_input(BenchmarkId::from_parameter(n), &params, |b, p| {
            b.iter(|| lambda_required(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn eigenvalues(c: &mut Criterion) {
    c.bench_function("solve_delta/n1_eps0.3", |b| {
        b.iter(|| solve_delta(black_box(1.0), 0.3, 1, 1e-12).unwrap())
    });
    c.bench_function("gap_edges/n3_eps0.05", |b| {
        b.iter(|| gap_edges(black_box(0.05), 3, 1e-12).unwrap())
    });
}

fn shooting(c: &mut Criterion) {
    let problem = ShootingProblem::new(
        0.5,
        KickSpec::Gaussian {
            strength: 1.0,
            width: 0.25,
        },
    )
    .unwrap();
    c.bench_function("mismatch/gaussian_w0.25", |b| {
        b.iter(|| mismatch(&problem, black_box(0.2)).unwrap())
    });
}

fn chart(c: &mut Criterion) {
    let mut group = c.benchmark_group("stability_chart");
    group.sample_size(10);
    group.bench_function("50x20", |b| {
        b.iter(|| stability_chart((0.0, 2.5), (0.0, 0.5), (50, 20), 1e-9).unwrap())
    });
    group.finish();
}

criterion_group!(benches, period_map, strengths, eigenvalues, shooting, chart);
criterion_main!(benches);

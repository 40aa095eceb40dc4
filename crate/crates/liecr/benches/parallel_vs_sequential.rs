//! Criterion benchmarks comparing the rayon data-parallel path against the
//! sequential fallback on the two heavy sweeps: sphere-sampled
//! transversality and the condition/oracle agreement sweep.
//!
//! Run with `cargo bench -p liecr`. Building with
//! `--no-default-features` makes both strategies sequential, which is the
//! baseline for judging the parallel speedup.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use liecr::linalg::cr;
use liecr::par::Strategy;
use liecr::pipeline::condition_agreement_sweep;
use liecr::su2::{sample_transversality_with, ActionParams};
use liecr::tol::Tolerances;

fn bench_sphere_sampling(c: &mut Criterion) {
    let tol = Tolerances::default();
    let params = ActionParams::new(cr(1.0 / 3.0), cr(1.0)).unwrap();
    let radii = [0.5, 1.0, 2.0];
    let mut group = c.benchmark_group("sample_transversality");
    for (label, strategy) in [
        ("sequential", Strategy::Sequential),
        ("auto", Strategy::Auto),
    ] {
        group.bench_with_input(
            BenchmarkId::new(label, 4096),
            &strategy,
            |bench, &strategy| {
                bench.iter(|| {
                    sample_transversality_with(strategy, &params, &radii, 4096, &tol).unwrap()
                })
            },
        );
    }
    group.finish();
}

fn bench_condition_sweep(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("condition_agreement_sweep");
    group.sample_size(10);
    for (label, strategy) in [
        ("sequential", Strategy::Sequential),
        ("auto", Strategy::Auto),
    ] {
        group.bench_with_input(
            BenchmarkId::new(label, 900),
            &strategy,
            |bench, &strategy| {
                bench.iter(|| condition_agreement_sweep(&[1, 2, 3], 300, 0, &tol, strategy))
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_sphere_sampling, bench_condition_sweep);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use repgbsm::{
    chi_from_concurrence, maf_sweep, monte_carlo, success_sweep, AttemptPlan, Execution, InfoState, MafPlan, Strategy,
};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo_1e6");
    g.sample_size(10);
    let info = InfoState::from_bloch(1.0, 0.4);
    let plan = AttemptPlan::continue_gbsm(3).unwrap();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| monte_carlo(black_box(0.5), &info, plan, 1_000_000, 42, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_maf_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("maf_sweep_50x6");
    g.sample_size(10);
    let grid: Vec<f64> = (1..=50).map(|i| i as f64 / 50.0).collect();
    let plans: Vec<MafPlan> = (0..=2)
        .flat_map(|m| [Strategy::ContinueGbsm, Strategy::MeBellFinal].map(|s| MafPlan::new(m, s).unwrap()))
        .collect();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| maf_sweep(black_box(&grid), &plans, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_success_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("success_sweep_200_depth5");
    let chis: Vec<f64> = (1..=200).map(|i| chi_from_concurrence(0.3 + 0.7 * i as f64 / 200.0).unwrap()).collect();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| success_sweep(black_box(&chis), 5, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_monte_carlo, bench_maf_sweep, bench_success_sweep);
criterion_main!(benches);

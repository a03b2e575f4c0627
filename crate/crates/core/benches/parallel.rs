//! Sequential vs data-parallel execution of the heavy kernels.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vqsgd::data_io::synth_least_squares;
use vqsgd::geometry::{random_unit, verify_covering, DirectionNet};
use vqsgd::privacy::audit_dp_ratio;
use vqsgd::quantizer::estimate_error;
use vqsgd::sgd_sim::{run, QuantizerSpec, Schedule, SimConfig};
use vqsgd::{Execution, Family, GaussianParams, PointSet, PointSetSpec, RngState};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("estimate_error/cp_d256_20k");
    let ps = PointSet::cross_polytope(256).unwrap();
    let v = random_unit(256, &mut RngState::new(1, 0).rng());
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| estimate_error(&ps, black_box(&v), 4, 20_000, RngState::new(2, 0), exec).unwrap())
        });
    }
    g.finish();
}

fn privacy_audit(c: &mut Criterion) {
    let mut g = c.benchmark_group("audit_dp_ratio/simplex_d64_2k");
    let ps = PointSet::simplex(64).unwrap();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| audit_dp_ratio(&ps, 2_000, RngState::new(3, 0), exec).unwrap())
        });
    }
    g.finish();
}

fn covering(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_covering/gauss_d8_m4000_20k");
    let ps = PointSet::gaussian(8, &GaussianParams::new(6.0, 4).with_override(4000)).unwrap();
    let net = DirectionNet::random(8, 20_000, RngState::new(5, 0));
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_covering(&ps, &net, exec).unwrap())
        });
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("sgd_run/ls_n4000_d100_N20_T20");
    let task = synth_least_squares(4_000, 100, 6).unwrap();
    let q = QuantizerSpec::Vq { set: PointSetSpec::new(Family::CrossPolytope), s: 10 };
    for (name, exec) in MODES {
        let mut cfg = SimConfig::new(task.clone(), 20, q.clone(), Schedule::Constant { eta: 0.01 }, 20);
        cfg.execution = exec;
        cfg.eval_every = 20;
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run(&cfg).unwrap()));
    }
    g.finish();
}

fn config() -> Criterion {
    Criterion::default()
        .sample_size(10)
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(3))
}

criterion_group! {
    name = benches;
    config = config();
    targets = monte_carlo, privacy_audit, covering, simulation
}
criterion_main!(benches);

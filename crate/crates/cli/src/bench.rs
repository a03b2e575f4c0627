use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;
use serde::Serialize;
use vqsgd::geometry::random_unit;
use vqsgd::quantizer::estimate_error;
use vqsgd::sgd_sim::{bit_cost, BitCost, QuantizerSpec};
use vqsgd::{encode, exact_second_moment, Execution, RngState};

use crate::common::{write_output, CmdResult, SetArgs};

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Output {
    family: String,
    d: usize,
    dim: usize,
    points: usize,
    s: usize,
    trials: usize,
    second_moment: f64,
    predicted_mse: f64,
    empirical_mse: f64,
    mse_stderr: f64,
    z_score: f64,
    bits: BitCost,
}

pub fn run(args: BenchArgs) -> CmdResult {
    let ps = args.set.build(args.d, args.seed)?;
    // Unit input in the caller's dimension, padded for the decomposition.
    let v = random_unit(args.d, &mut RngState::new(args.seed, 1).rng());
    let mut u = v.clone();
    u.resize(ps.dim(), 0.0);
    let m2 = exact_second_moment(&ps, &encode(&ps, &u)?);
    let predicted = (m2 - 1.0) / args.s as f64;
    let est = estimate_error(&ps, &v, args.s, args.trials, RngState::new(args.seed, 2), Execution::Parallel)?;
    let spec = QuantizerSpec::Vq { set: args.set.spec(args.seed), s: args.s };
    let z = if est.mse_stderr > 0.0 { (est.mse - predicted) / est.mse_stderr } else { 0.0 };
    let out = Output {
        family: ps.family().to_string(),
        d: args.d,
        dim: ps.dim(),
        points: ps.len(),
        s: args.s,
        trials: args.trials,
        second_moment: m2,
        predicted_mse: predicted,
        empirical_mse: est.mse,
        mse_stderr: est.mse_stderr,
        z_score: z,
        bits: bit_cost(&spec, args.d, ps.len()),
    };
    let mut json = serde_json::to_string_pretty(&out)?;
    json.push('\n');
    write_output(args.out.as_deref(), json.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

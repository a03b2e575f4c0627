use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use vqsgd::geometry::{make_direction_net, verify_covering, CoveringReport};
use vqsgd::Execution;

use crate::common::{exit, write_output, CmdResult, SetArgs};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long)]
    pub d: usize,
    /// Direction net radius
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON report path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Output<'a> {
    family: String,
    d: usize,
    dim: usize,
    points: usize,
    radius: f64,
    #[serde(flatten)]
    report: &'a CoveringReport,
}

pub fn run(args: VerifyArgs) -> CmdResult {
    let ps = args.set.build(args.d, args.seed)?;
    let net = make_direction_net(ps.dim(), args.eps, args.seed)?;
    let report = verify_covering(&ps, &net, Execution::Parallel)?;
    let out = Output {
        family: ps.family().to_string(),
        d: args.d,
        dim: ps.dim(),
        points: ps.len(),
        radius: ps.radius(),
        report: &report,
    };
    let mut json = serde_json::to_string_pretty(&out)?;
    json.push('\n');
    write_output(args.out.as_deref(), json.as_bytes())?;
    Ok(exit(report.pass))
}

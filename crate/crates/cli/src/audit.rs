use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use vqsgd::privacy::{audit_dp_ratio, dp_ratio_bound};
use vqsgd::{Execution, RngState};

use crate::common::{exit, write_output, CmdResult, SetArgs};

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long)]
    pub d: usize,
    /// Random input pairs, on top of the extremal candidates
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Optional JSON copy of the result
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Output {
    family: String,
    d: usize,
    points: usize,
    inputs: usize,
    max_ratio: f64,
    epsilon: f64,
    bound: Option<f64>,
    pass: bool,
}

fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.9}")
    } else {
        "inf".into()
    }
}

pub fn run(args: AuditArgs) -> CmdResult {
    let ps = args.set.build(args.d, args.seed)?;
    let audit = audit_dp_ratio(&ps, args.pairs, RngState::new(args.seed, 0), Execution::Parallel)?;
    let bound = dp_ratio_bound(ps.family(), ps.dim());
    // No proven bound: only a finite ratio gives any privacy at all.
    let pass = match bound {
        Some(b) => audit.max_ratio <= b * (1.0 + 1e-6),
        None => audit.max_ratio.is_finite(),
    };
    println!("family {} d {} points {}", ps.family(), ps.dim(), ps.len());
    println!("inputs {}", audit.n_inputs);
    println!("max_ratio {}", fmt_num(audit.max_ratio));
    println!("epsilon {}", fmt_num(audit.ln_ratio()));
    println!("bound {}", bound.map_or("none".into(), fmt_num));
    println!("pass {pass}");
    if let Some(p) = &args.out {
        let out = Output {
            family: ps.family().to_string(),
            d: ps.dim(),
            points: ps.len(),
            inputs: audit.n_inputs,
            max_ratio: audit.max_ratio,
            epsilon: audit.ln_ratio(),
            bound,
            pass,
        };
        let mut json = serde_json::to_string_pretty(&out)?;
        json.push('\n');
        write_output(Some(p), json.as_bytes())?;
    }
    Ok(exit(pass))
}

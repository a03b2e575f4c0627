use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Args;
use serde::Serialize;
use vqsgd::sgd_sim::{run as run_sim, BitCost, EvalRecord, SimConfigFile};

use crate::common::{write_output, CmdResult, Failure, EXIT_DIVERGED, EXIT_USAGE};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// JSON run configuration
    #[arg(long)]
    pub config: PathBuf,
    /// CSV metrics path; the summary goes next to it with a `.json` extension
    #[arg(long)]
    pub out: PathBuf,
    /// Fill the `ms` column with wall-clock time (output no longer reproducible)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Serialize)]
struct Summary<'a> {
    iterations_completed: usize,
    workers: usize,
    bits_per_iteration: &'a BitCost,
    final_record: &'a EvalRecord,
    averaged_loss: f64,
    averaged_loss_gap: Option<f64>,
    diverged_at: Option<usize>,
}

pub fn run(args: SimulateArgs) -> CmdResult {
    let file = SimConfigFile::load(&args.config).map_err(|e| match e {
        vqsgd::Error::Json(j) => Failure::new(crate::common::EXIT_PARSE, format!("{}: {j}", args.config.display())),
        e => Failure::from(e),
    })?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let mut cfg = file.into_config(base)?;
    cfg.record_time = args.timing;
    if args.out.extension().is_some_and(|e| e == "json") {
        return Err(Failure::new(EXIT_USAGE, "--out names the CSV file and must not end in .json"));
    }
    let metrics = run_sim(&cfg)?;
    write_output(Some(&args.out), metrics.to_csv().as_bytes())?;
    let fin = metrics.final_record();
    let summary = Summary {
        iterations_completed: fin.iter,
        workers: cfg.workers,
        bits_per_iteration: &metrics.bits,
        final_record: fin,
        averaged_loss: metrics.averaged_loss,
        averaged_loss_gap: metrics.averaged_loss_gap,
        diverged_at: metrics.diverged_at,
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    write_output(Some(&args.out.with_extension("json")), json.as_bytes())?;
    Ok(match metrics.diverged_at {
        Some(t) => {
            eprintln!("diverged at iteration {t}");
            ExitCode::from(EXIT_DIVERGED)
        }
        None => ExitCode::SUCCESS,
    })
}

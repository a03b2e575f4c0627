//! `vqsgd` command-line front end.

mod audit;
mod bench;
mod common;
mod quantize;
mod simulate;
mod verify;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use common::{Failure, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "vqsgd", version, about = "Vector-quantized gradients: quantize, verify, audit, simulate, bench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantize CSV vectors into wire records, or dequantize wire records to CSV
    Quantize(quantize::QuantizeArgs),
    /// Check that a point set's hull contains the unit ball
    Verify(verify::VerifyArgs),
    /// Audit the coefficient ratio that bounds intrinsic privacy
    AuditDp(audit::AuditArgs),
    /// Run a distributed SGD simulation from a JSON config
    Simulate(simulate::SimulateArgs),
    /// Compare empirical quantization error with the exact prediction
    Bench(bench::BenchArgs),
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("VQSGD_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::new(EXIT_USAGE, format!("VQSGD_THREADS must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return Err(Failure::new(EXIT_USAGE, "VQSGD_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = init_threads().and_then(|_| match cli.command {
        Command::Quantize(a) => quantize::run(a),
        Command::Verify(a) => verify::run(a),
        Command::AuditDp(a) => audit::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::Bench(a) => bench::run(a),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Args;
use vqsgd::{Error, Family, PointSet, PointSetSpec};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DIMENSION: u8 = 3;
pub const EXIT_DIVERGED: u8 = 4;
pub const EXIT_USAGE: u8 = 64;

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn new(code: u8, msg: impl Into<String>) -> Self {
        Self { code, msg: msg.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::Wire(_) | Error::Json(_) => EXIT_PARSE,
            Error::InvalidDimension { .. }
            | Error::DimensionConstraint { .. }
            | Error::UnsupportedDimension { .. }
            | Error::LengthMismatch { .. } => EXIT_DIMENSION,
            Error::Diverged { .. } => EXIT_DIVERGED,
            Error::ParameterRange(_) | Error::CardinalityOverflow { .. } => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_FAIL, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(EXIT_FAIL, e.to_string())
    }
}

pub type CmdResult = Result<ExitCode, Failure>;

/// Point-set selection shared by the subcommands.
#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    /// Point-set family: cp, scp, simplex, hadamard, rm, gauss, epsnet
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Gaussian family radius
    #[arg(long)]
    pub radius: Option<f64>,
    /// Gaussian family cardinality override
    #[arg(long)]
    pub points: Option<usize>,
    /// ε-net family parameter
    #[arg(long = "set-eps")]
    pub set_eps: Option<f64>,
}

impl SetArgs {
    pub fn spec(&self, seed: u64) -> PointSetSpec {
        PointSetSpec {
            family: self.family,
            radius: self.radius,
            points: self.points,
            net_eps: self.set_eps,
            seed,
        }
    }

    pub fn build(&self, d: usize, seed: u64) -> Result<PointSet, Failure> {
        Ok(self.spec(seed).build(d)?)
    }
}

pub fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

/// Writes to the file, or to standard output when no path is given.
pub fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::new(EXIT_FAIL, format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(bytes)?;
            so.flush()?;
            Ok(())
        }
    }
}

pub fn read_input(path: Option<&PathBuf>) -> Result<Vec<u8>, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read(p).map_err(|e| Failure::new(EXIT_FAIL, format!("{}: {e}", p.display())))
        }
        _ => {
            let mut buf = Vec::new();
            std::io::Read::read_to_end(&mut std::io::stdin().lock(), &mut buf)?;
            Ok(buf)
        }
    }
}

pub fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;
use vqsgd::sgd_sim::{bit_cost, QuantizerSpec};
use vqsgd::{dequantize, quantize, QuantizedGradient, RngState};

use crate::common::{read_input, write_output, CmdResult, Failure, SetArgs, EXIT_DIMENSION, EXIT_PARSE};

const WIRE_MAGIC: &[u8] = b"VQSG";

#[derive(Args, Debug)]
pub struct QuantizeArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Vector dimension; inferred from the first row when omitted
    #[arg(long)]
    pub d: Option<usize>,
    /// Samples per vector
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV vectors (one per line) or wire records; `-` or absent reads stdin
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_csv(text: &str, d: Option<usize>) -> Result<Vec<Vec<f64>>, Failure> {
    let mut rows = Vec::new();
    let mut width = d;
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                let f = f.trim();
                f.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Failure::new(EXIT_PARSE, format!("line {}: bad value '{f}'", k + 1)))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let w = *width.get_or_insert(row.len());
        if row.len() != w {
            return Err(Failure::new(
                EXIT_DIMENSION,
                format!("line {}: expected {w} values, got {}", k + 1, row.len()),
            ));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn run(args: QuantizeArgs) -> CmdResult {
    let bytes = read_input(args.input.as_ref())?;
    let mut report = String::new();
    let out_bytes = if bytes.starts_with(WIRE_MAGIC) {
        let msgs = QuantizedGradient::read_all(&bytes)?;
        let mut csv = String::new();
        for m in &msgs {
            if args.d.is_some_and(|d| d != m.d) {
                return Err(Failure::new(EXIT_DIMENSION, format!("record dimension {} != --d", m.d)));
            }
            let ps = args.set.build(m.d, args.seed)?;
            let v = dequantize(&ps, m)?;
            let fields: Vec<String> = v.iter().map(|x| format!("{x:.9e}")).collect();
            csv.push_str(&fields.join(","));
            csv.push('\n');
        }
        writeln!(report, "{} records decoded", msgs.len()).unwrap();
        csv.into_bytes()
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|_| Failure::new(EXIT_PARSE, "input is neither CSV text nor wire records"))?;
        let rows = parse_csv(text, args.d)?;
        let mut out = Vec::new();
        if let Some(first) = rows.first() {
            let d = first.len();
            let ps = args.set.build(d, args.seed)?;
            let spec = QuantizerSpec::Vq { set: args.set.spec(args.seed), s: args.s };
            let cost = bit_cost(&spec, d, ps.len());
            for (i, row) in rows.iter().enumerate() {
                let mut rng = RngState::new(args.seed, i as u64).rng();
                let q = quantize(&ps, row, args.s, &mut rng)?;
                out.extend_from_slice(&q.to_bytes());
                writeln!(report, "vector {i}: {} index bits + {} norm bits", cost.payload_bits, cost.norm_bits).unwrap();
            }
        }
        writeln!(report, "{} records written", rows.len()).unwrap();
        out
    };
    write_output(args.out.as_deref(), &out_bytes)?;
    if args.out.is_some() {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    Ok(ExitCode::SUCCESS)
}

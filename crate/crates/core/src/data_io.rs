//! LIBSVM datasets, manifests, synthetic tasks and splits.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngState;
use crate::sgd_sim::{Features, Task};

/// Sparse labelled rows. Feature indices are 0-based and strictly increasing
/// within a row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub d: usize,
    pub rows: Vec<Vec<(u32, f64)>>,
    pub labels: Vec<f64>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    fn subset(&self, idx: &[usize]) -> Self {
        Self {
            d: self.d,
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses LIBSVM text: `label idx:value ...` with 1-based, strictly
/// increasing indices. Blank lines are skipped. The dimension is the larger
/// of `d_hint` and the largest index seen.
pub fn parse_libsvm<R: BufRead>(reader: R, d_hint: Option<usize>) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut d = d_hint.unwrap_or(0);
    for (k, line) in reader.lines().enumerate() {
        let lineno = k + 1;
        let line = line?;
        let mut tok = line.split_whitespace();
        let Some(label) = tok.next() else { continue };
        let label: f64 = label
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad label '{label}'")))?;
        let mut row = Vec::new();
        let mut prev: Option<u32> = None;
        for pair in tok {
            let (i, v) = pair
                .split_once(':')
                .ok_or_else(|| parse_err(lineno, format!("malformed pair '{pair}'")))?;
            let i: u32 = i
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad index '{i}'")))?;
            if i == 0 {
                return Err(parse_err(lineno, "indices are 1-based"));
            }
            let v: f64 = v
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad value '{v}'")))?;
            if !v.is_finite() {
                return Err(parse_err(lineno, format!("non-finite value '{pair}'")));
            }
            let i = i - 1;
            if prev.is_some_and(|p| i <= p) {
                return Err(parse_err(lineno, format!("index {} not increasing", i + 1)));
            }
            prev = Some(i);
            row.push((i, v));
        }
        if let Some(p) = prev {
            d = d.max(p as usize + 1);
        }
        rows.push(row);
        labels.push(label);
    }
    Ok(Dataset { d, rows, labels })
}

pub fn read_libsvm(path: &Path, d_hint: Option<usize>) -> Result<Dataset> {
    parse_libsvm(BufReader::new(File::open(path)?), d_hint)
}

/// Writes LIBSVM text; values use the shortest representation that parses
/// back to the same float.
pub fn write_libsvm<W: Write>(ds: &Dataset, mut w: W) -> Result<()> {
    for (row, label) in ds.rows.iter().zip(&ds.labels) {
        write!(w, "{label}")?;
        for (i, v) in row {
            write!(w, " {}:{v}", i + 1)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// One dataset entry; paths are relative to the manifest file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub path: PathBuf,
    pub d: usize,
    #[serde(default)]
    pub test_path: Option<PathBuf>,
}

impl DatasetManifest {
    fn resolve(mut self, base: &Path) -> Self {
        if self.path.is_relative() {
            self.path = base.join(&self.path);
        }
        if let Some(t) = self.test_path.take() {
            self.test_path = Some(if t.is_relative() { base.join(t) } else { t });
        }
        self
    }

    /// Train set and, when listed, the test set, both at dimension `d`.
    pub fn load(&self) -> Result<(Dataset, Option<Dataset>)> {
        let train = read_libsvm(&self.path, Some(self.d))?;
        let test = match &self.test_path {
            Some(p) => Some(read_libsvm(p, Some(self.d))?),
            None => None,
        };
        Ok((train, test))
    }
}

/// Reads a manifest holding one entry or a list of entries.
pub fn load_manifest(path: &Path) -> Result<Vec<DatasetManifest>> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<DatasetManifest>),
        One(DatasetManifest),
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let entries = match serde_json::from_str::<OneOrMany>(&text)? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(m) => vec![m],
    };
    Ok(entries.into_iter().map(|m| m.resolve(base)).collect())
}

/// Dense least squares with `A`, `θ*` i.i.d. standard normal and `b = Aθ*`.
pub fn synth_least_squares(n: usize, d: usize, seed: u64) -> Result<Task> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidDimension { d: n.min(d), reason: "n and d must be at least 1" });
    }
    let mut rng = RngState::new(seed, 0).rng();
    let a: Vec<f64> = (0..n * d).map(|_| StandardNormal.sample(&mut rng)).collect();
    let theta: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
    Ok(Task::least_squares(Features::Dense { d, data: a }, theta))
}

/// Seeded permutation split; the first part holds `round(fraction · n)` rows.
pub fn train_test_split(ds: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::ParameterRange(format!("split fraction {fraction} must lie in (0, 1)")));
    }
    let n = ds.n();
    let k = (fraction * n as f64).round() as usize;
    if k == 0 || k == n {
        return Err(Error::ParameterRange(format!("split of {n} rows at {fraction} leaves a side empty")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut RngState::new(seed, 0).rng());
    Ok((ds.subset(&idx[..k]), ds.subset(&idx[k..])))
}

//! Synchronous parameter-server SGD with quantized worker gradients.

use std::ops::Range;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data_io::{load_manifest, read_libsvm, synth_least_squares, train_test_split, Dataset};
use crate::encoder::encode;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{axpy, dist2, dot, norm2};
use crate::pointset::{PointSet, PointSetSpec};
use crate::privacy::{private_dequantize, rappor_privatize, rr_privatize, PrivateMessage};
use crate::quantizer::{aggregate, exact_second_moment, quantize, QuantizedGradient};
use crate::rng::RngState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    LeastSquares,
    Logistic,
}

/// Design matrix, dense row-major or sparse rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Features {
    Dense { d: usize, data: Vec<f64> },
    Sparse { d: usize, rows: Vec<Vec<(u32, f64)>> },
}

impl Features {
    pub fn n(&self) -> usize {
        match self {
            Features::Dense { d, data } => data.len() / d,
            Features::Sparse { rows, .. } => rows.len(),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            Features::Dense { d, .. } | Features::Sparse { d, .. } => *d,
        }
    }

    /// `<a_i, theta>`
    #[inline]
    pub fn row_dot(&self, i: usize, theta: &[f64]) -> f64 {
        match self {
            Features::Dense { d, data } => dot(&data[i * d..(i + 1) * d], theta),
            Features::Sparse { rows, .. } => rows[i].iter().map(|&(j, v)| v * theta[j as usize]).sum(),
        }
    }

    /// `out += alpha · a_i`
    #[inline]
    pub fn row_axpy(&self, i: usize, alpha: f64, out: &mut [f64]) {
        match self {
            Features::Dense { d, data } => axpy(alpha, &data[i * d..(i + 1) * d], out),
            Features::Sparse { rows, .. } => {
                for &(j, v) in &rows[i] {
                    out[j as usize] += alpha * v;
                }
            }
        }
    }

    /// Dense copy of a sparse matrix.
    pub fn densify(&self) -> Features {
        match self {
            Features::Dense { .. } => self.clone(),
            Features::Sparse { d, rows } => {
                let mut data = vec![0.0; rows.len() * d];
                for (i, row) in rows.iter().enumerate() {
                    for &(j, v) in row {
                        data[i * d + j as usize] = v;
                    }
                }
                Features::Dense { d: *d, data }
            }
        }
    }
}

/// Objective plus data. Least squares: `(1/n)‖Aθ - b‖²`. Logistic:
/// `(1/n) Σ log(1 + exp(-b_i <a_i, θ>)) + reg ‖θ‖²` with `reg = 1/(2n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub kind: TaskKind,
    pub features: Features,
    pub labels: Vec<f64>,
    pub theta_star: Option<Vec<f64>>,
    pub reg: f64,
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl Task {
    /// Targets `b = Aθ*`, computed with the same row product used for the
    /// loss so the optimum has exactly zero residual.
    pub fn least_squares(features: Features, theta_star: Vec<f64>) -> Self {
        let labels = (0..features.n()).map(|i| features.row_dot(i, &theta_star)).collect();
        Self { kind: TaskKind::LeastSquares, features, labels, theta_star: Some(theta_star), reg: 0.0 }
    }

    /// Logistic regression on a dataset with `±1` labels.
    pub fn logistic(ds: &Dataset) -> Result<Self> {
        if ds.n() == 0 {
            return Err(Error::Empty("dataset has no rows"));
        }
        if let Some(bad) = ds.labels.iter().find(|&&b| b != 1.0 && b != -1.0) {
            return Err(Error::ParameterRange(format!("logistic labels must be +1/-1, found {bad}")));
        }
        Ok(Self {
            kind: TaskKind::Logistic,
            features: Features::Sparse { d: ds.d, rows: ds.rows.clone() },
            labels: ds.labels.clone(),
            theta_star: None,
            reg: 1.0 / (2.0 * ds.n() as f64),
        })
    }

    pub fn n(&self) -> usize {
        self.features.n()
    }

    pub fn d(&self) -> usize {
        self.features.d()
    }

    pub fn loss(&self, theta: &[f64]) -> f64 {
        let n = self.n() as f64;
        match self.kind {
            TaskKind::LeastSquares => {
                (0..self.n())
                    .map(|i| {
                        let r = self.features.row_dot(i, theta) - self.labels[i];
                        r * r
                    })
                    .sum::<f64>()
                    / n
            }
            TaskKind::Logistic => {
                (0..self.n())
                    .map(|i| softplus(-self.labels[i] * self.features.row_dot(i, theta)))
                    .sum::<f64>()
                    / n
                    + self.reg * dot(theta, theta)
            }
        }
    }

    /// Fraction of rows whose sign prediction misses the label (`0` predicts `+1`).
    pub fn classification_error(&self, theta: &[f64]) -> f64 {
        let wrong = (0..self.n())
            .filter(|&i| {
                let pred = if self.features.row_dot(i, theta) >= 0.0 { 1.0 } else { -1.0 };
                pred != self.labels[i]
            })
            .count();
        wrong as f64 / self.n() as f64
    }

    /// Power-iteration estimate of the gradient Lipschitz constant, inflated
    /// by 5% to stay above the true value.
    pub fn smoothness(&self) -> f64 {
        let (n, d) = (self.n(), self.d());
        let mut x = vec![1.0 / (d as f64).sqrt(); d];
        let mut lam = 0.0;
        for _ in 0..200 {
            let mut y = vec![0.0; d];
            for i in 0..n {
                let z = self.features.row_dot(i, &x);
                self.features.row_axpy(i, z, &mut y);
            }
            lam = norm2(&y);
            if lam == 0.0 {
                break;
            }
            y.iter_mut().for_each(|v| *v /= lam);
            x = y;
        }
        let lam = lam / n as f64;
        1.05 * match self.kind {
            TaskKind::LeastSquares => 2.0 * lam,
            TaskKind::Logistic => lam / 4.0 + 2.0 * self.reg,
        }
    }
}

/// Gradient of the objective restricted to `shard`, normalized by the
/// shard size. The logistic regularizer uses the full dataset size.
pub fn local_gradient(task: &Task, shard: Range<usize>, theta: &[f64]) -> Result<Vec<f64>> {
    if shard.is_empty() || shard.end > task.n() {
        return Err(Error::Empty("shard"));
    }
    let size = shard.len() as f64;
    let mut g = vec![0.0; task.d()];
    match task.kind {
        TaskKind::LeastSquares => {
            for i in shard {
                let r = task.features.row_dot(i, theta) - task.labels[i];
                task.features.row_axpy(i, 2.0 * r / size, &mut g);
            }
        }
        TaskKind::Logistic => {
            for i in shard {
                let b = task.labels[i];
                let z = task.features.row_dot(i, theta);
                task.features.row_axpy(i, -b * sigmoid(-b * z) / size, &mut g);
            }
            axpy(2.0 * task.reg, theta, &mut g);
        }
    }
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::Diverged { iteration: 0 });
    }
    Ok(g)
}

/// Contiguous blocks of `n / workers` rows; the last worker also takes the
/// remainder.
pub fn shards(n: usize, workers: usize) -> Result<Vec<Range<usize>>> {
    if workers == 0 {
        return Err(Error::ParameterRange("need at least one worker".into()));
    }
    let chunk = n / workers;
    if chunk == 0 {
        return Err(Error::ParameterRange(format!("{n} rows cannot feed {workers} workers")));
    }
    Ok((0..workers)
        .map(|k| k * chunk..if k + 1 == workers { n } else { (k + 1) * chunk })
        .collect())
}

/// How workers encode their gradients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuantizerSpec {
    /// Full-precision gradients.
    Exact,
    Vq {
        #[serde(flatten)]
        set: PointSetSpec,
        s: usize,
    },
    Rr {
        #[serde(flatten)]
        set: PointSetSpec,
        epsilon: f64,
    },
    Rappor {
        #[serde(flatten)]
        set: PointSetSpec,
        epsilon: f64,
    },
}

impl QuantizerSpec {
    pub fn point_set(&self, d: usize) -> Result<Option<PointSet>> {
        match self {
            QuantizerSpec::Exact => Ok(None),
            QuantizerSpec::Vq { set, .. } | QuantizerSpec::Rr { set, .. } | QuantizerSpec::Rappor { set, .. } => {
                set.build(d).map(Some)
            }
        }
    }
}

/// Per-worker, per-round communication.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitCost {
    /// Payload bits with `⌈log2 m⌉` per index.
    pub payload_bits: u64,
    /// Payload bits with `log2 m` per index.
    pub payload_bits_exact: f64,
    pub norm_bits: u64,
    pub total: u64,
    pub total_exact: f64,
}

impl BitCost {
    fn new(payload_bits: u64, payload_bits_exact: f64, norm_bits: u64) -> Self {
        Self {
            payload_bits,
            payload_bits_exact,
            norm_bits,
            total: payload_bits + norm_bits,
            total_exact: payload_bits_exact + norm_bits as f64,
        }
    }
}

fn ceil_log2(m: usize) -> u64 {
    (usize::BITS - (m.max(1) - 1).leading_zeros()) as u64
}

/// Bits for a quantizer over `m` points in dimension `d`.
pub fn bit_cost(q: &QuantizerSpec, d: usize, m: usize) -> BitCost {
    let lg = (m as f64).log2();
    match q {
        QuantizerSpec::Exact => BitCost::new(32 * d as u64, 32.0 * d as f64, 0),
        QuantizerSpec::Vq { s, .. } => BitCost::new(*s as u64 * ceil_log2(m), *s as f64 * lg, 32),
        QuantizerSpec::Rr { .. } => BitCost::new(ceil_log2(m), lg, 32),
        QuantizerSpec::Rappor { .. } => BitCost::new(m as u64, m as f64, 32),
    }
}

/// Bits each worker sends per round.
pub fn bits_per_iteration(q: &QuantizerSpec, d: usize) -> Result<BitCost> {
    let m = q.point_set(d)?.map_or(0, |ps| ps.len());
    Ok(bit_cost(q, d, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    Constant { eta: f64 },
    /// `1 / (L + σ √(T/2) / R)`.
    SmoothConstant { l: f64, r: f64, sigma: f64, t: usize },
    /// `c / (t + 1)`.
    InverseT { c: f64 },
}

pub fn step_size(schedule: &Schedule, t: usize) -> Result<f64> {
    let bad = |what: &str| Err(Error::ParameterRange(format!("schedule parameter {what} out of range")));
    match *schedule {
        Schedule::Constant { eta } => {
            if !(eta > 0.0 && eta.is_finite()) {
                return bad("eta");
            }
            Ok(eta)
        }
        Schedule::SmoothConstant { l, r, sigma, t: horizon } => {
            if !(l > 0.0 && r > 0.0 && sigma >= 0.0 && horizon > 0) {
                return bad("L, R, sigma or T");
            }
            Ok(1.0 / (l + sigma * (horizon as f64 / 2.0).sqrt() / r))
        }
        Schedule::InverseT { c } => {
            if !(c > 0.0 && c.is_finite()) {
                return bad("c");
            }
            Ok(c / (t as f64 + 1.0))
        }
    }
}

/// `R √(2σ²/T) + L R² / T`.
pub fn suboptimality_bound(l: f64, r: f64, sigma: f64, t: usize) -> f64 {
    let t = t as f64;
    r * (2.0 * sigma * sigma / t).sqrt() + l * r * r / t
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub task: Task,
    /// Held-out data for the classification error; the training set otherwise.
    pub test_task: Option<Task>,
    pub workers: usize,
    pub quantizer: QuantizerSpec,
    pub schedule: Schedule,
    pub iterations: usize,
    pub seed: u64,
    pub eval_every: usize,
    pub execution: Execution,
    /// Record wall time in the `ms` column (zero otherwise).
    pub record_time: bool,
    /// Track the exact quantization variance of the aggregated gradient.
    pub track_variance: bool,
}

impl SimConfig {
    pub fn new(task: Task, workers: usize, quantizer: QuantizerSpec, schedule: Schedule, iterations: usize) -> Self {
        Self {
            task,
            test_task: None,
            workers,
            quantizer,
            schedule,
            iterations,
            seed: 0,
            eval_every: 1,
            execution: Execution::default(),
            record_time: false,
            track_variance: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub iter: usize,
    pub param_error: Option<f64>,
    pub loss: f64,
    pub class_error: Option<f64>,
    pub cum_bits: u64,
    pub ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub records: Vec<EvalRecord>,
    pub bits: BitCost,
    pub final_theta: Vec<f64>,
    /// Mean of the post-update iterates `θ_1 … θ_T`.
    pub averaged_theta: Vec<f64>,
    pub averaged_loss: f64,
    /// `f(θ̄) - f(θ*)` when the optimum is known.
    pub averaged_loss_gap: Option<f64>,
    /// Largest `E‖ĝ - g‖²` over rounds, for index quantizers when tracked.
    pub max_quantizer_variance: Option<f64>,
    /// Round at which the iterate became non-finite.
    pub diverged_at: Option<usize>,
}

impl RunMetrics {
    pub fn final_record(&self) -> &EvalRecord {
        self.records.last().expect("runs record iteration 0")
    }

    /// CSV with columns `iter,param_error,loss,class_error,cum_bits,ms`.
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.9e}"));
        let mut s = String::from("iter,param_error,loss,class_error,cum_bits,ms\n");
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{:.9e},{},{},{:.3}\n",
                r.iter,
                opt(r.param_error),
                r.loss,
                opt(r.class_error),
                r.cum_bits,
                r.ms
            ));
        }
        s
    }
}

enum Message {
    Exact(Vec<f64>),
    Index(QuantizedGradient),
    Private(PrivateMessage),
}

struct WorkerOutput {
    msg: Message,
    variance: f64,
}

fn worker_round(
    cfg: &SimConfig,
    ps: Option<&PointSet>,
    shard: Range<usize>,
    theta: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<WorkerOutput> {
    let g = local_gradient(&cfg.task, shard, theta)?;
    let out = match (&cfg.quantizer, ps) {
        (QuantizerSpec::Exact, _) => WorkerOutput { msg: Message::Exact(g), variance: 0.0 },
        (QuantizerSpec::Vq { s, .. }, Some(ps)) => {
            let q = quantize(ps, &g, *s, rng)?;
            let mut variance = 0.0;
            let n = norm2(&g);
            if cfg.track_variance && n > 0.0 {
                let mut u: Vec<f64> = g.iter().map(|x| x / n).collect();
                u.resize(ps.dim(), 0.0);
                let m2 = exact_second_moment(ps, &encode(ps, &u)?);
                variance = n * n * (m2 - 1.0) / *s as f64;
            }
            WorkerOutput { msg: Message::Index(q), variance }
        }
        (QuantizerSpec::Rr { epsilon, .. }, Some(ps)) => {
            WorkerOutput { msg: Message::Private(rr_privatize(ps, &g, *epsilon, rng)?), variance: 0.0 }
        }
        (QuantizerSpec::Rappor { epsilon, .. }, Some(ps)) => {
            WorkerOutput { msg: Message::Private(rappor_privatize(ps, &g, *epsilon, rng)?), variance: 0.0 }
        }
        _ => unreachable!("point set built for every index quantizer"),
    };
    Ok(out)
}

fn server_aggregate(ps: Option<&PointSet>, outputs: Vec<WorkerOutput>, d: usize) -> Result<Vec<f64>> {
    let n = outputs.len() as f64;
    let mut index_msgs = Vec::new();
    let mut sum = vec![0.0; d];
    for o in outputs {
        match o.msg {
            Message::Exact(g) => axpy(1.0, &g, &mut sum),
            Message::Private(m) => axpy(1.0, &private_dequantize(ps.expect("point set"), &m)?, &mut sum),
            Message::Index(q) => index_msgs.push(q),
        }
    }
    if !index_msgs.is_empty() {
        return aggregate(ps.expect("point set"), &index_msgs);
    }
    sum.iter_mut().for_each(|x| *x /= n);
    Ok(sum)
}

/// Runs the synchronous loop. A non-finite iterate stops the run early with
/// `diverged_at` set; the metrics up to that point are kept.
pub fn run(cfg: &SimConfig) -> Result<RunMetrics> {
    if cfg.iterations == 0 || cfg.eval_every == 0 {
        return Err(Error::ParameterRange("iterations and eval_every must be positive".into()));
    }
    let task = &cfg.task;
    let d = task.d();
    let ps = cfg.quantizer.point_set(d)?;
    let bits = bit_cost(&cfg.quantizer, d, ps.as_ref().map_or(0, |p| p.len()));
    let shards = shards(task.n(), cfg.workers)?;
    let mut rngs: Vec<ChaCha8Rng> = (0..cfg.workers).map(|k| RngState::new(cfg.seed, k as u64).rng()).collect();
    let start = Instant::now();
    let eval_task = cfg.test_task.as_ref().unwrap_or(task);

    let record = |t: usize, theta: &[f64]| EvalRecord {
        iter: t,
        param_error: task.theta_star.as_ref().map(|s| dist2(s, theta)),
        loss: task.loss(theta),
        class_error: (task.kind == TaskKind::Logistic).then(|| eval_task.classification_error(theta)),
        cum_bits: t as u64 * cfg.workers as u64 * bits.total,
        ms: if cfg.record_time { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 },
    };

    let mut theta = vec![0.0; d];
    let mut avg = vec![0.0; d];
    let mut records = vec![record(0, &theta)];
    let mut max_var: Option<f64> = None;
    let mut diverged_at = None;
    let mut done = 0;
    for t in 0..cfg.iterations {
        let eta = step_size(&cfg.schedule, t)?;
        let outputs = cfg.execution.map_mut(&mut rngs, |k, rng| {
            worker_round(cfg, ps.as_ref(), shards[k].clone(), &theta, rng)
        });
        let outputs = match outputs.into_iter().collect::<Result<Vec<_>>>() {
            Ok(o) => o,
            Err(Error::Diverged { .. }) => {
                diverged_at = Some(t);
                break;
            }
            Err(e) => return Err(e),
        };
        if cfg.track_variance && matches!(cfg.quantizer, QuantizerSpec::Vq { .. } | QuantizerSpec::Exact) {
            let v = outputs.iter().map(|o| o.variance).sum::<f64>() / (cfg.workers * cfg.workers) as f64;
            max_var = Some(max_var.map_or(v, |m: f64| m.max(v)));
        }
        let g = server_aggregate(ps.as_ref(), outputs, d)?;
        axpy(-eta, &g, &mut theta);
        if theta.iter().any(|x| !x.is_finite()) {
            diverged_at = Some(t + 1);
            break;
        }
        axpy(1.0, &theta, &mut avg);
        done = t + 1;
        if done % cfg.eval_every == 0 || done == cfg.iterations {
            records.push(record(done, &theta));
        }
    }
    if done > 0 {
        avg.iter_mut().for_each(|x| *x /= done as f64);
    }
    let averaged_loss = task.loss(&avg);
    let averaged_loss_gap = task.theta_star.as_ref().map(|s| averaged_loss - task.loss(s));
    Ok(RunMetrics {
        records,
        bits,
        final_theta: theta,
        averaged_theta: avg,
        averaged_loss,
        averaged_loss_gap,
        max_quantizer_variance: max_var,
        diverged_at,
    })
}

/// Where a config file gets its data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TaskSpec {
    SyntheticLeastSquares {
        n: usize,
        d: usize,
        seed: u64,
    },
    /// Logistic regression on LIBSVM files. Without a test file and with
    /// `test_fraction` set, the training file is split.
    Libsvm {
        path: PathBuf,
        #[serde(default)]
        test_path: Option<PathBuf>,
        #[serde(default)]
        d: Option<usize>,
        #[serde(default)]
        test_fraction: Option<f64>,
    },
    /// Logistic regression on a named manifest entry.
    Manifest {
        manifest: PathBuf,
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        test_fraction: Option<f64>,
    },
}

/// JSON form of [`SimConfig`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfigFile {
    pub task: TaskSpec,
    pub workers: usize,
    pub quantizer: QuantizerSpec,
    pub schedule: Schedule,
    pub iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub eval_every: usize,
    #[serde(default)]
    pub execution: Execution,
}

fn one() -> usize {
    1
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_relative() {
        base.join(p)
    } else {
        p.to_path_buf()
    }
}

fn logistic_pair(train: Dataset, test: Option<Dataset>, fraction: Option<f64>, seed: u64) -> Result<(Task, Option<Task>)> {
    match (test, fraction) {
        (Some(test), _) => Ok((Task::logistic(&train)?, Some(Task::logistic(&test)?))),
        (None, Some(f)) => {
            let (a, b) = train_test_split(&train, f, seed)?;
            Ok((Task::logistic(&a)?, Some(Task::logistic(&b)?)))
        }
        (None, None) => Ok((Task::logistic(&train)?, None)),
    }
}

impl SimConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Materializes the task; relative paths resolve against `base`.
    pub fn into_config(self, base: &Path) -> Result<SimConfig> {
        let (task, test_task) = match &self.task {
            TaskSpec::SyntheticLeastSquares { n, d, seed } => (synth_least_squares(*n, *d, *seed)?, None),
            TaskSpec::Libsvm { path, test_path, d, test_fraction } => {
                let train = read_libsvm(&resolve(base, path), *d)?;
                let test = match test_path {
                    Some(p) => Some(read_libsvm(&resolve(base, p), Some(d.unwrap_or(train.d).max(train.d)))?),
                    None => None,
                };
                let train = match &test {
                    Some(t) if t.d > train.d => Dataset { d: t.d, ..train },
                    _ => train,
                };
                logistic_pair(train, test, *test_fraction, self.seed)?
            }
            TaskSpec::Manifest { manifest, name, test_fraction } => {
                let entries = load_manifest(&resolve(base, manifest))?;
                let entry = match name {
                    Some(n) => entries.into_iter().find(|e| &e.name == n),
                    None => entries.into_iter().next(),
                }
                .ok_or(Error::Empty("no matching manifest entry"))?;
                let (train, test) = entry.load()?;
                logistic_pair(train, test, *test_fraction, self.seed)?
            }
        };
        let mut cfg = SimConfig::new(task, self.workers, self.quantizer, self.schedule, self.iterations);
        cfg.test_task = test_task;
        cfg.seed = self.seed;
        cfg.eval_every = self.eval_every;
        cfg.execution = self.execution;
        Ok(cfg)
    }
}

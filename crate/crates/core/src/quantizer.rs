//! Stochastic vector quantization: gradient -> index message -> estimate.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoder::{encode, CoeffVector};
use crate::error::{Error, Result};
use crate::exec::{chunk_bounds, Execution};
use crate::linalg::norm2;
use crate::pointset::{Family, PointSet};
use crate::rng::RngState;

pub const WIRE_MAGIC: &[u8; 4] = b"VQSG";
pub const WIRE_VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 1 + 4 + 2 + 4;

/// One worker's message: the gradient norm plus `s` point indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizedGradient {
    pub family: Family,
    /// Caller-facing dimension, before any padding.
    pub d: usize,
    pub s: usize,
    pub norm: f32,
    pub indices: Vec<u32>,
}

/// Inverse-CDF sampler over a coefficient vector.
#[derive(Clone, Debug)]
pub struct CdfSampler {
    cdf: Vec<f64>,
    last_positive: usize,
}

impl CdfSampler {
    pub fn new(a: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf: Vec<f64> = a
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        let last_positive = a.iter().rposition(|&x| x > 0.0).unwrap_or(0);
        Self { cdf, last_positive }
    }

    /// Index `i` is chosen when `u` falls in `[cdf[i-1], cdf[i])`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().unwrap_or(&0.0);
        let u = rng.random::<f64>() * total;
        let i = self.cdf.partition_point(|&c| c <= u);
        // u < total always, but guard against roundoff in the final bucket
        i.min(self.last_positive)
    }
}

/// Draws one index with probability `a_i`.
pub fn sample<R: Rng + ?Sized>(a: &CoeffVector, rng: &mut R) -> usize {
    CdfSampler::new(&a.a).sample(rng)
}

fn check_gradient(ps: &PointSet, g: &[f64]) -> Result<()> {
    if g.len() != ps.input_dim() {
        return Err(Error::LengthMismatch { expected: ps.input_dim(), got: g.len() });
    }
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGradient);
    }
    Ok(())
}

/// Normalizes and pads `g` for encoding. Returns `None` for the zero vector.
pub(crate) fn unit_direction(ps: &PointSet, g: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
    check_gradient(ps, g)?;
    let norm = norm2(g);
    if !norm.is_finite() {
        return Err(Error::InvalidGradient);
    }
    if norm == 0.0 {
        return Ok(None);
    }
    let mut u: Vec<f64> = g.iter().map(|x| x / norm).collect();
    u.resize(ps.dim(), 0.0);
    Ok(Some((norm, u)))
}

/// Quantizes `g` with `s` independent samples.
pub fn quantize<R: Rng + ?Sized>(ps: &PointSet, g: &[f64], s: usize, rng: &mut R) -> Result<QuantizedGradient> {
    if s == 0 || s > u16::MAX as usize {
        return Err(Error::ParameterRange(format!("repetition count {s} outside [1, 65535]")));
    }
    let d = ps.input_dim();
    let Some((norm, u)) = unit_direction(ps, g)? else {
        return Ok(QuantizedGradient { family: ps.family(), d, s, norm: 0.0, indices: vec![0; s] });
    };
    let a = encode(ps, &u)?;
    let sampler = CdfSampler::new(&a.a);
    let indices = (0..s).map(|_| sampler.sample(rng) as u32).collect();
    Ok(QuantizedGradient { family: ps.family(), d, s, norm: norm as f32, indices })
}

fn check_message(ps: &PointSet, family: Family, d: usize) -> Result<()> {
    if family != ps.family() {
        return Err(Error::Mismatch(format!("message family {family}, point set {}", ps.family())));
    }
    if d != ps.input_dim() {
        return Err(Error::Mismatch(format!("message dimension {d}, point set {}", ps.input_dim())));
    }
    Ok(())
}

/// `norm / s · Σ c_{idx}`, truncated to the caller dimension.
pub fn dequantize(ps: &PointSet, qg: &QuantizedGradient) -> Result<Vec<f64>> {
    check_message(ps, qg.family, qg.d)?;
    if qg.indices.len() != qg.s {
        return Err(Error::LengthMismatch { expected: qg.s, got: qg.indices.len() });
    }
    let mut out = vec![0.0; ps.dim()];
    for &idx in &qg.indices {
        if idx as usize >= ps.len() {
            return Err(Error::IndexOutOfRange { index: idx as usize, m: ps.len() });
        }
    }
    if qg.norm != 0.0 {
        let scale = qg.norm as f64 / qg.s as f64;
        for &idx in &qg.indices {
            ps.accumulate(idx as usize, scale, &mut out);
        }
    }
    out.truncate(ps.input_dim());
    Ok(out)
}

/// Mean of the dequantized messages, summed in message order.
pub fn aggregate(ps: &PointSet, messages: &[QuantizedGradient]) -> Result<Vec<f64>> {
    let first = messages.first().ok_or(Error::Empty("no messages to aggregate"))?;
    for m in messages {
        if m.family != first.family || m.d != first.d {
            return Err(Error::Mismatch("heterogeneous messages".into()));
        }
    }
    let mut sum = vec![0.0; ps.input_dim()];
    for m in messages {
        for (s, x) in sum.iter_mut().zip(dequantize(ps, m)?) {
            *s += x;
        }
    }
    let n = messages.len() as f64;
    sum.iter_mut().for_each(|x| *x /= n);
    Ok(sum)
}

/// `E‖Q(v)‖² = Σ a_i ‖c_i‖²`.
pub fn exact_second_moment(ps: &PointSet, a: &CoeffVector) -> f64 {
    a.a.iter()
        .enumerate()
        .filter(|(_, &ai)| ai != 0.0)
        .map(|(i, &ai)| ai * ps.sq_norm(i))
        .sum()
}

impl QuantizedGradient {
    /// Little-endian wire encoding.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * self.indices.len());
        out.extend_from_slice(WIRE_MAGIC);
        out.push(WIRE_VERSION);
        out.push(self.family.id());
        out.extend_from_slice(&(self.d as u32).to_le_bytes());
        out.extend_from_slice(&(self.s as u16).to_le_bytes());
        out.extend_from_slice(&self.norm.to_le_bytes());
        for idx in &self.indices {
            out.extend_from_slice(&idx.to_le_bytes());
        }
        out
    }

    /// Parses one message; returns it and the number of bytes consumed.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Self, usize)> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Wire(format!("truncated header ({} bytes)", bytes.len())));
        }
        if &bytes[0..4] != WIRE_MAGIC {
            return Err(Error::Wire("bad magic".into()));
        }
        if bytes[4] != WIRE_VERSION {
            return Err(Error::Wire(format!("unsupported version {}", bytes[4])));
        }
        let family = Family::from_id(bytes[5])?;
        let d = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
        let s = u16::from_le_bytes(bytes[10..12].try_into().unwrap()) as usize;
        let norm = f32::from_le_bytes(bytes[12..16].try_into().unwrap());
        if s == 0 {
            return Err(Error::Wire("repetition count is zero".into()));
        }
        if !(norm.is_finite() && norm >= 0.0) {
            return Err(Error::Wire(format!("invalid norm {norm}")));
        }
        let end = HEADER_LEN + 4 * s;
        if bytes.len() < end {
            return Err(Error::Wire(format!("truncated payload: need {end} bytes, have {}", bytes.len())));
        }
        let indices = bytes[HEADER_LEN..end]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok((Self { family, d, s, norm, indices }, end))
    }

    /// Parses a concatenation of messages.
    pub fn read_all(mut bytes: &[u8]) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        while !bytes.is_empty() {
            let (m, used) = Self::from_bytes(bytes)?;
            out.push(m);
            bytes = &bytes[used..];
        }
        Ok(out)
    }
}

/// Monte Carlo summary of `dequantize(quantize(v))`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub trials: usize,
    /// Coordinate-wise sample mean of the estimates.
    pub mean: Vec<f64>,
    /// Coordinate-wise sample variance of the estimates.
    pub coord_var: Vec<f64>,
    /// Mean of `‖v - v̂‖²`.
    pub mse: f64,
    /// Standard error of `mse`.
    pub mse_stderr: f64,
    /// Largest `‖v̂‖` seen.
    pub max_norm: f64,
}

const MC_CHUNK: usize = 2048;

/// Repeats quantize/dequantize `trials` times. Chunks use forked streams of
/// `rng`, so the result does not depend on `exec`.
pub fn estimate_error(
    ps: &PointSet,
    v: &[f64],
    s: usize,
    trials: usize,
    rng: RngState,
    exec: Execution,
) -> Result<ErrorEstimate> {
    if trials == 0 {
        return Err(Error::Empty("zero Monte Carlo trials"));
    }
    let d = ps.input_dim();
    let chunks = chunk_bounds(trials, MC_CHUNK);
    struct Partial {
        sum: Vec<f64>,
        sum_sq: Vec<f64>,
        err: f64,
        err_sq: f64,
        max_norm: f64,
    }
    let parts: Vec<Result<Partial>> = exec.map_range(chunks.len(), |c| {
        let (lo, hi) = chunks[c];
        let mut r = rng.fork(c as u64).rng();
        let mut p = Partial {
            sum: vec![0.0; d],
            sum_sq: vec![0.0; d],
            err: 0.0,
            err_sq: 0.0,
            max_norm: 0.0,
        };
        for _ in lo..hi {
            let q = quantize(ps, v, s, &mut r)?;
            let est = dequantize(ps, &q)?;
            let mut e = 0.0;
            let mut n = 0.0;
            for k in 0..d {
                p.sum[k] += est[k];
                p.sum_sq[k] += est[k] * est[k];
                e += (est[k] - v[k]) * (est[k] - v[k]);
                n += est[k] * est[k];
            }
            p.err += e;
            p.err_sq += e * e;
            p.max_norm = p.max_norm.max(n.sqrt());
        }
        Ok(p)
    });
    let mut total = Partial { sum: vec![0.0; d], sum_sq: vec![0.0; d], err: 0.0, err_sq: 0.0, max_norm: 0.0 };
    for p in parts {
        let p = p?;
        for k in 0..d {
            total.sum[k] += p.sum[k];
            total.sum_sq[k] += p.sum_sq[k];
        }
        total.err += p.err;
        total.err_sq += p.err_sq;
        total.max_norm = total.max_norm.max(p.max_norm);
    }
    let n = trials as f64;
    let mean: Vec<f64> = total.sum.iter().map(|x| x / n).collect();
    let denom = (n - 1.0).max(1.0);
    let coord_var = total
        .sum_sq
        .iter()
        .zip(&mean)
        .map(|(sq, m)| ((sq - n * m * m) / denom).max(0.0))
        .collect();
    let mse = total.err / n;
    let var_err = ((total.err_sq - n * mse * mse) / denom).max(0.0);
    Ok(ErrorEstimate {
        trials,
        mean,
        coord_var,
        mse,
        mse_stderr: (var_err / n).sqrt(),
        max_norm: total.max_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{encode_cross_polytope, encode_simplex};
    use crate::geometry::random_in_ball;
    use proptest::prelude::*;

    fn cv(a: Vec<f64>) -> CoeffVector {
        let d = a.len();
        CoeffVector { a, d, family: Family::CrossPolytope }
    }

    #[test]
    fn point_mass_sampling() {
        let mut rng = RngState::new(0, 0).rng();
        let a = cv(vec![1.0, 0.0, 0.0]);
        assert!((0..1000).all(|_| sample(&a, &mut rng) == 0));
        let b = cv(vec![0.0, 0.0, 1.0, 0.0]);
        assert!((0..1000).all(|_| sample(&b, &mut rng) == 2));
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let mut rng = RngState::new(1, 0).rng();
        let a = cv(vec![0.125; 8]);
        let mut counts = [0usize; 8];
        let n = 100_000;
        for _ in 0..n {
            counts[sample(&a, &mut rng)] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.125).abs() <= 0.004);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = cv(vec![0.1, 0.2, 0.3, 0.4]);
        let draw = || {
            let mut r = RngState::new(77, 2).rng();
            (0..50).map(|_| sample(&a, &mut r)).collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn zero_gradient() {
        let ps = PointSet::cross_polytope(4).unwrap();
        let mut rng = RngState::new(0, 0).rng();
        let q = quantize(&ps, &[0.0; 4], 3, &mut rng).unwrap();
        assert_eq!((q.norm, q.indices.clone()), (0.0, vec![0, 0, 0]));
        assert_eq!(dequantize(&ps, &q).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn first_index_probability() {
        let ps = PointSet::cross_polytope(4).unwrap();
        let mut rng = RngState::new(3, 0).rng();
        let n = 100_000;
        let mut hits = 0;
        for _ in 0..n {
            let q = quantize(&ps, &[2.0, 0.0, 0.0, 0.0], 1, &mut rng).unwrap();
            assert_eq!(q.norm, 2.0);
            hits += (q.indices[0] == 0) as usize;
        }
        let p = 0.5625;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - p).abs() <= 4.0 * sigma);
    }

    #[test]
    fn invalid_inputs() {
        let ps = PointSet::cross_polytope(4).unwrap();
        let mut rng = RngState::new(0, 0).rng();
        assert!(matches!(quantize(&ps, &[f64::INFINITY, 0.0, 0.0, 0.0], 1, &mut rng), Err(Error::InvalidGradient)));
        assert!(matches!(quantize(&ps, &[1.0; 3], 1, &mut rng), Err(Error::LengthMismatch { .. })));
        assert!(quantize(&ps, &[1.0; 4], 0, &mut rng).is_err());
        let bad = QuantizedGradient { family: Family::CrossPolytope, d: 4, s: 1, norm: 1.0, indices: vec![8] };
        assert!(matches!(dequantize(&ps, &bad), Err(Error::IndexOutOfRange { .. })));
        let other = QuantizedGradient { family: Family::Simplex, ..bad.clone() };
        assert!(matches!(dequantize(&ps, &other), Err(Error::Mismatch(_))));
    }

    #[test]
    fn single_sample_dequantize() {
        let ps = PointSet::cross_polytope(4).unwrap();
        let q = QuantizedGradient { family: Family::CrossPolytope, d: 4, s: 1, norm: 1.5, indices: vec![6] };
        assert_eq!(dequantize(&ps, &q).unwrap(), vec![0.0, 0.0, -3.0, 0.0]);
        let q2 = QuantizedGradient { s: 2, indices: vec![0, 4], ..q };
        assert_eq!(dequantize(&ps, &q2).unwrap(), vec![0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn padded_round_trip_truncates() {
        let ps = PointSet::for_input_dim(Family::Hadamard, 5).unwrap();
        let mut rng = RngState::new(4, 0).rng();
        let q = quantize(&ps, &[0.1, 0.2, 0.3, 0.4, 0.5], 4, &mut rng).unwrap();
        assert_eq!(q.d, 5);
        assert_eq!(dequantize(&ps, &q).unwrap().len(), 5);
    }

    #[test]
    fn aggregation() {
        let ps = PointSet::cross_polytope(4).unwrap();
        let m = QuantizedGradient { family: Family::CrossPolytope, d: 4, s: 1, norm: 1.0, indices: vec![1] };
        let one = dequantize(&ps, &m).unwrap();
        assert_eq!(aggregate(&ps, &vec![m.clone(); 5]).unwrap(), one);
        let neg = QuantizedGradient { indices: vec![5], ..m.clone() };
        assert_eq!(aggregate(&ps, &[m.clone(), neg]).unwrap(), vec![0.0; 4]);
        assert!(matches!(aggregate(&ps, &[]), Err(Error::Empty(_))));
        let odd = QuantizedGradient { d: 3, ..m.clone() };
        assert!(matches!(aggregate(&ps, &[m, odd]), Err(Error::Mismatch(_))));
    }

    #[test]
    fn second_moment_oracles() {
        let cp = PointSet::cross_polytope(4).unwrap();
        let a = encode_cross_polytope(&[0.3, -0.2, 0.1, 0.5], false).unwrap();
        assert!((exact_second_moment(&cp, &a) - 4.0).abs() < 1e-12);
        let rm = PointSet::reed_muller(4).unwrap();
        let a = crate::encoder::encode(&rm, &[0.3, -0.2, 0.1, 0.5]).unwrap();
        assert!((exact_second_moment(&rm, &a) - 4.0).abs() < 1e-12);
        let sx = PointSet::simplex(4).unwrap();
        let a = encode_simplex(&[0.0; 4]).unwrap();
        assert!((exact_second_moment(&sx, &a) - 64.0).abs() < 1e-12);
    }

    #[test]
    fn wire_size_and_errors() {
        let q = QuantizedGradient { family: Family::CrossPolytope, d: 100, s: 5, norm: 1.25, indices: vec![1, 2, 3, 4, 199] };
        let b = q.to_bytes();
        assert_eq!(b.len(), 36);
        assert_eq!(QuantizedGradient::from_bytes(&b).unwrap(), (q.clone(), 36));
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(matches!(QuantizedGradient::from_bytes(&bad), Err(Error::Wire(_))));
        assert!(QuantizedGradient::from_bytes(&b[..30]).is_err());
        let mut v2 = b.clone();
        v2[4] = 2;
        assert!(QuantizedGradient::from_bytes(&v2).is_err());
        let two = [b.clone(), b].concat();
        assert_eq!(QuantizedGradient::read_all(&two).unwrap().len(), 2);
    }

    #[test]
    fn monte_carlo_is_schedule_independent() {
        let ps = PointSet::simplex(8).unwrap();
        let mut rng = RngState::new(6, 0).rng();
        let v = random_in_ball(8, &mut rng);
        let a = estimate_error(&ps, &v, 2, 5000, RngState::new(1, 0), Execution::Sequential).unwrap();
        let b = estimate_error(&ps, &v, 2, 5000, RngState::new(1, 0), Execution::Parallel).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.mse.to_bits(), b.mse.to_bits());
    }

    #[test]
    fn unbiased_and_variance_identity() {
        let ps = PointSet::hadamard(15).unwrap();
        let mut rng = RngState::new(12, 0).rng();
        let v = random_in_ball(15, &mut rng);
        let est = estimate_error(&ps, &v, 1, 100_000, RngState::new(2, 0), Execution::Parallel).unwrap();
        let n = est.trials as f64;
        for k in 0..15 {
            let band = 3.5 * (est.coord_var[k] / n).sqrt();
            assert!((est.mean[k] - v[k]).abs() <= band, "coord {k}");
        }
        // v̂ = ‖v‖ Q(v/‖v‖), so E‖v - v̂‖² = ‖v‖² (Σ a_i(u)‖c_i‖² - 1).
        let n2 = norm2(&v).powi(2);
        let u: Vec<f64> = v.iter().map(|x| x / n2.sqrt()).collect();
        let a = crate::encoder::encode(&ps, &u).unwrap();
        let want = n2 * (exact_second_moment(&ps, &a) - 1.0);
        assert!((est.mse - want).abs() <= 3.5 * est.mse_stderr);
        assert!(est.max_norm <= ps.radius() * (1.0 + 1e-6));
    }

    fn arb_message() -> impl Strategy<Value = QuantizedGradient> {
        (0u8..7, 1u32..1_000_000, proptest::collection::vec(any::<u32>(), 1..40), 0f32..1e30).prop_map(
            |(f, d, indices, norm)| QuantizedGradient {
                family: Family::from_id(f).unwrap(),
                d: d as usize,
                s: indices.len(),
                norm,
                indices,
            },
        )
    }

    proptest! {
        #[test]
        fn wire_round_trip(q in arb_message()) {
            let b = q.to_bytes();
            let (back, used) = QuantizedGradient::from_bytes(&b).unwrap();
            prop_assert_eq!(used, b.len());
            prop_assert_eq!(back, q);
        }

        #[test]
        fn truncated_messages_rejected(q in arb_message(), cut in 0usize..16) {
            let b = q.to_bytes();
            let n = b.len().saturating_sub(cut + 1);
            prop_assert!(QuantizedGradient::from_bytes(&b[..n]).is_err());
        }
    }
}

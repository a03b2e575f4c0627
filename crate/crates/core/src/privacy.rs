//! Locally private wrappers over the quantizer and an empirical auditor for
//! the intrinsic privacy of full-support decompositions.
//!
//! The privacy parameter is rounded to `f32` before use so that a message
//! carries exactly the value both sides compute with.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoder::{encode, CoeffVector};
use crate::error::{Error, Result};
use crate::exec::{chunk_bounds, Execution};
use crate::geometry::random_in_ball;
use crate::pointset::{Family, PointSet};
use crate::quantizer::{unit_direction, CdfSampler};
use crate::rng::RngState;

pub const PM_MAGIC: &[u8; 4] = b"VQPM";
pub const PM_VERSION: u8 = 1;
const PM_HEADER_LEN: usize = 4 + 1 + 1 + 1 + 4 + 4 + 4;
/// Largest point set RAPPOR will encode (the payload is one bit per point).
pub const RAPPOR_MAX_POINTS: usize = 1 << 16;

fn check_epsilon(epsilon: f64) -> Result<f64> {
    let e = epsilon as f32;
    if !(e.is_finite() && e > 0.0) {
        return Err(Error::ParameterRange(format!("epsilon {epsilon} must be positive and finite")));
    }
    Ok(e as f64)
}

/// Randomized response over `m` outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RrParams {
    pub epsilon: f64,
    pub m: usize,
    pub p: f64,
    pub q: f64,
}

impl RrParams {
    pub fn new(epsilon: f64, m: usize) -> Result<Self> {
        let epsilon = check_epsilon(epsilon)?;
        if m < 2 {
            return Err(Error::ParameterRange(format!("randomized response needs m >= 2, got {m}")));
        }
        let e = epsilon.exp();
        let denom = e + m as f64 - 1.0;
        Ok(Self { epsilon, m, p: e / denom, q: 1.0 / denom })
    }
}

/// Independent bit flips at rate `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RapporParams {
    pub epsilon: f64,
    pub p: f64,
}

impl RapporParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        let epsilon = check_epsilon(epsilon)?;
        Ok(Self { epsilon, p: 1.0 / ((epsilon / 2.0).exp() + 1.0) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    Rr,
    Rappor,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    Index(u32),
    /// One entry per point, in decode order.
    Bits(Vec<bool>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivateMessage {
    pub mechanism: Mechanism,
    pub family: Family,
    pub d: usize,
    pub epsilon: f32,
    pub norm: f32,
    pub payload: Payload,
}

/// Quantizer coefficients for `g`; the zero gradient uses the decomposition
/// of the origin so that its index is privatized like any other.
fn coefficients(ps: &PointSet, g: &[f64]) -> Result<(f64, CoeffVector)> {
    match unit_direction(ps, g)? {
        Some((norm, u)) => Ok((norm, encode(ps, &u)?)),
        None => Ok((0.0, encode(ps, &vec![0.0; ps.dim()])?)),
    }
}

fn rr_flip<R: Rng + ?Sized>(index: usize, params: &RrParams, rng: &mut R) -> usize {
    if rng.random::<f64>() < params.p {
        return index;
    }
    let j = rng.random_range(0..params.m - 1);
    if j >= index {
        j + 1
    } else {
        j
    }
}

/// Quantizes with one sample, then applies randomized response.
pub fn rr_privatize<R: Rng + ?Sized>(ps: &PointSet, g: &[f64], epsilon: f64, rng: &mut R) -> Result<PrivateMessage> {
    let params = RrParams::new(epsilon, ps.len())?;
    let (norm, a) = coefficients(ps, g)?;
    let i = CdfSampler::new(&a.a).sample(rng);
    let y = rr_flip(i, &params, rng);
    Ok(PrivateMessage {
        mechanism: Mechanism::Rr,
        family: ps.family(),
        d: ps.input_dim(),
        epsilon: params.epsilon as f32,
        norm: norm as f32,
        payload: Payload::Index(y as u32),
    })
}

/// Quantizes with one sample, one-hot encodes, and flips each bit.
pub fn rappor_privatize<R: Rng + ?Sized>(ps: &PointSet, g: &[f64], epsilon: f64, rng: &mut R) -> Result<PrivateMessage> {
    let params = RapporParams::new(epsilon)?;
    if ps.len() > RAPPOR_MAX_POINTS {
        return Err(Error::CardinalityOverflow { requested: ps.len() as f64, cap: RAPPOR_MAX_POINTS });
    }
    let (norm, a) = coefficients(ps, g)?;
    let i = CdfSampler::new(&a.a).sample(rng);
    let bits = (0..ps.len()).map(|j| (j == i) ^ (rng.random::<f64>() < params.p)).collect();
    Ok(PrivateMessage {
        mechanism: Mechanism::Rappor,
        family: ps.family(),
        d: ps.input_dim(),
        epsilon: params.epsilon as f32,
        norm: norm as f32,
        payload: Payload::Bits(bits),
    })
}

fn check_private(ps: &PointSet, msg: &PrivateMessage, mech: Mechanism) -> Result<()> {
    if msg.mechanism != mech {
        return Err(Error::Mismatch(format!("expected {mech:?} message, got {:?}", msg.mechanism)));
    }
    if msg.family != ps.family() || msg.d != ps.input_dim() {
        return Err(Error::Mismatch(format!(
            "message {}/{} does not match point set {}/{}",
            msg.family,
            msg.d,
            ps.family(),
            ps.input_dim()
        )));
    }
    Ok(())
}

/// Unbiased estimate `norm · (c_y - q Σ c_i) / (p - q)`.
pub fn rr_dequantize(ps: &PointSet, msg: &PrivateMessage) -> Result<Vec<f64>> {
    check_private(ps, msg, Mechanism::Rr)?;
    let Payload::Index(y) = msg.payload else {
        return Err(Error::Mismatch("randomized response needs an index payload".into()));
    };
    let y = y as usize;
    if y >= ps.len() {
        return Err(Error::IndexOutOfRange { index: y, m: ps.len() });
    }
    let params = RrParams::new(msg.epsilon as f64, ps.len())?;
    let norm = msg.norm as f64;
    let gain = norm / (params.p - params.q);
    let mut out: Vec<f64> = ps.point_sum().iter().map(|s| -gain * params.q * s).collect();
    ps.accumulate(y, gain, &mut out);
    out.truncate(ps.input_dim());
    Ok(out)
}

/// Unbiased estimate `norm / (1 - 2p) · Σ_j (y_j - p) c_j`.
pub fn rappor_dequantize(ps: &PointSet, msg: &PrivateMessage) -> Result<Vec<f64>> {
    check_private(ps, msg, Mechanism::Rappor)?;
    let Payload::Bits(bits) = &msg.payload else {
        return Err(Error::Mismatch("RAPPOR needs a bit payload".into()));
    };
    if bits.len() != ps.len() {
        return Err(Error::LengthMismatch { expected: ps.len(), got: bits.len() });
    }
    let params = RapporParams::new(msg.epsilon as f64)?;
    let gain = msg.norm as f64 / (1.0 - 2.0 * params.p);
    let mut out: Vec<f64> = ps.point_sum().iter().map(|s| -gain * params.p * s).collect();
    for (j, &b) in bits.iter().enumerate() {
        if b {
            ps.accumulate(j, gain, &mut out);
        }
    }
    out.truncate(ps.input_dim());
    Ok(out)
}

/// Dispatches on the message mechanism.
pub fn private_dequantize(ps: &PointSet, msg: &PrivateMessage) -> Result<Vec<f64>> {
    match msg.mechanism {
        Mechanism::Rr => rr_dequantize(ps, msg),
        Mechanism::Rappor => rappor_dequantize(ps, msg),
    }
}

impl PrivateMessage {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(PM_HEADER_LEN + 4);
        out.extend_from_slice(PM_MAGIC);
        out.push(PM_VERSION);
        out.push(match self.mechanism {
            Mechanism::Rr => 0,
            Mechanism::Rappor => 1,
        });
        out.push(self.family.id());
        out.extend_from_slice(&(self.d as u32).to_le_bytes());
        out.extend_from_slice(&self.epsilon.to_le_bytes());
        out.extend_from_slice(&self.norm.to_le_bytes());
        match &self.payload {
            Payload::Index(i) => out.extend_from_slice(&i.to_le_bytes()),
            Payload::Bits(bits) => {
                let mut packed = vec![0u8; bits.len().div_ceil(8)];
                for (j, &b) in bits.iter().enumerate() {
                    if b {
                        packed[j / 8] |= 1 << (j % 8);
                    }
                }
                out.extend_from_slice(&packed);
            }
        }
        out
    }

    /// Parses one message. The bit payload length is not on the wire, so the
    /// receiver supplies the point count `m`. Returns the bytes consumed.
    pub fn from_bytes(bytes: &[u8], m: usize) -> Result<(Self, usize)> {
        if bytes.len() < PM_HEADER_LEN {
            return Err(Error::Wire(format!("truncated header ({} bytes)", bytes.len())));
        }
        if &bytes[0..4] != PM_MAGIC {
            return Err(Error::Wire("bad magic".into()));
        }
        if bytes[4] != PM_VERSION {
            return Err(Error::Wire(format!("unsupported version {}", bytes[4])));
        }
        let mechanism = match bytes[5] {
            0 => Mechanism::Rr,
            1 => Mechanism::Rappor,
            x => return Err(Error::Wire(format!("unknown mechanism {x}"))),
        };
        let family = Family::from_id(bytes[6])?;
        let d = u32::from_le_bytes(bytes[7..11].try_into().unwrap()) as usize;
        let epsilon = f32::from_le_bytes(bytes[11..15].try_into().unwrap());
        let norm = f32::from_le_bytes(bytes[15..19].try_into().unwrap());
        let rest = &bytes[PM_HEADER_LEN..];
        let (payload, used) = match mechanism {
            Mechanism::Rr => {
                if rest.len() < 4 {
                    return Err(Error::Wire("truncated index payload".into()));
                }
                (Payload::Index(u32::from_le_bytes(rest[..4].try_into().unwrap())), 4)
            }
            Mechanism::Rappor => {
                let n = m.div_ceil(8);
                if rest.len() < n {
                    return Err(Error::Wire(format!("truncated bit payload: need {n} bytes")));
                }
                let bits = (0..m).map(|j| rest[j / 8] >> (j % 8) & 1 == 1).collect();
                (Payload::Bits(bits), n)
            }
        };
        Ok((Self { mechanism, family, d, epsilon, norm, payload }, PM_HEADER_LEN + used))
    }
}

/// Proven per-family bound on the coefficient ratio, where one exists.
pub fn dp_ratio_bound(family: Family, d: usize) -> Option<f64> {
    match family {
        Family::Simplex => Some(7.0),
        Family::Hadamard => Some(1.0 + std::f64::consts::SQRT_2),
        Family::ScaledCrossPolytope => Some(2.0 * (d as f64).sqrt() + 3.0),
        _ => None,
    }
}

/// Outcome of [`audit_dp_ratio`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DpAudit {
    /// `max_c max_{x,y} a_c(x) / a_c(y)`; infinite when some coefficient
    /// vanishes on one input and not on another.
    pub max_ratio: f64,
    /// Point index attaining the maximum.
    pub point: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub n_inputs: usize,
}

impl DpAudit {
    pub fn ln_ratio(&self) -> f64 {
        self.max_ratio.ln()
    }
}

/// Candidate inputs: random points in the ball followed by the extremal
/// directions that maximize or minimize coefficients of the closed forms.
struct AuditInputs {
    d: usize,
    n_random: usize,
    rng: RngState,
    extremal: Vec<Vec<f64>>,
}

impl AuditInputs {
    fn new(ps: &PointSet, n_random: usize, rng: RngState) -> Result<Self> {
        let d = ps.dim();
        let m = ps.len();
        let mut extremal = Vec::new();
        let mut push_pair = |v: Vec<f64>| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.0 {
                let u: Vec<f64> = v.iter().map(|x| x / n).collect();
                extremal.push(u.iter().map(|x| -x).collect());
                extremal.push(u);
            }
        };
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            push_pair(e);
        }
        push_pair(vec![1.0; d]);
        for c in 0..m {
            push_pair(ps.decode(c)?);
        }
        // Gradient of each coefficient, exact for the affine closed forms.
        let a0 = encode(ps, &vec![0.0; d])?.a;
        let mut grads = vec![vec![0.0; d]; m];
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            let aj = encode(ps, &e)?.a;
            for c in 0..m {
                grads[c][j] = aj[c] - a0[c];
            }
        }
        for g in grads {
            push_pair(g);
        }
        Ok(Self { d, n_random, rng, extremal })
    }

    fn len(&self) -> usize {
        self.n_random + self.extremal.len()
    }

    fn get(&self, k: usize) -> Vec<f64> {
        if k < self.n_random {
            random_in_ball(self.d, &mut self.rng.fork(k as u64).rng())
        } else {
            self.extremal[k - self.n_random].clone()
        }
    }
}

/// Maximizes `a_c(x) / a_c(y)` over `2 · n_pairs` random inputs plus the
/// extremal candidates, for every point `c`.
pub fn audit_dp_ratio(ps: &PointSet, n_pairs: usize, rng: RngState, exec: Execution) -> Result<DpAudit> {
    let inputs = AuditInputs::new(ps, 2 * n_pairs, rng)?;
    let m = ps.len();
    let n = inputs.len();
    // Per chunk: for each point, (max, argmax, min, argmin).
    type Ext = Vec<(f64, usize, f64, usize)>;
    let chunks = chunk_bounds(n, 256);
    let partial: Vec<Result<Ext>> = exec.map_range(chunks.len(), |ci| {
        let (lo, hi) = chunks[ci];
        let mut ext: Ext = vec![(f64::NEG_INFINITY, 0, f64::INFINITY, 0); m];
        for k in lo..hi {
            let a = encode(ps, &inputs.get(k))?.a;
            for (e, &ac) in ext.iter_mut().zip(&a) {
                if ac > e.0 {
                    e.0 = ac;
                    e.1 = k;
                }
                if ac < e.2 {
                    e.2 = ac;
                    e.3 = k;
                }
            }
        }
        Ok(ext)
    });
    let mut ext: Ext = vec![(f64::NEG_INFINITY, 0, f64::INFINITY, 0); m];
    for p in partial {
        for (e, q) in ext.iter_mut().zip(p?) {
            if q.0 > e.0 {
                e.0 = q.0;
                e.1 = q.1;
            }
            if q.2 < e.2 {
                e.2 = q.2;
                e.3 = q.3;
            }
        }
    }
    let mut best = (f64::NEG_INFINITY, 0usize);
    for (c, &(hi, _, lo, _)) in ext.iter().enumerate() {
        let r = if lo > 0.0 {
            hi / lo
        } else if hi > 0.0 {
            f64::INFINITY
        } else {
            1.0
        };
        if r > best.0 {
            best = (r, c);
        }
    }
    let (_, kx, _, ky) = ext[best.1];
    Ok(DpAudit { max_ratio: best.0, point: best.1, x: inputs.get(kx), y: inputs.get(ky), n_inputs: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm2;

    #[test]
    fn rr_parameters() {
        let p = RrParams::new(3f64.ln(), 4).unwrap();
        assert!((p.p - 0.5).abs() < 1e-7 && (p.q - 1.0 / 6.0).abs() < 1e-7);
        assert!((p.p + 3.0 * p.q - 1.0).abs() < 1e-15);
        assert!((p.p / p.q - (p.epsilon).exp()).abs() < 1e-12);
        assert!(matches!(RrParams::new(0.0, 4), Err(Error::ParameterRange(_))));
        assert!(RrParams::new(-1.0, 4).is_err());
    }

    #[test]
    fn rappor_parameters() {
        let p = RapporParams::new(2.0 * 3f64.ln()).unwrap();
        assert!((p.p - 0.25).abs() < 1e-7);
        let ratio = ((1.0 - p.p) / p.p).powi(2);
        assert!((ratio - p.epsilon.exp()).abs() < 1e-9);
    }

    #[test]
    fn rr_dequantize_example() {
        // m = 8 and e^eps = 5 give p - q = 1/3.
        let ps = PointSet::cross_polytope(4).unwrap();
        let msg = PrivateMessage {
            mechanism: Mechanism::Rr,
            family: Family::CrossPolytope,
            d: 4,
            epsilon: 5f64.ln() as f32,
            norm: 1.0,
            payload: Payload::Index(0),
        };
        let v = rr_dequantize(&ps, &msg).unwrap();
        assert!((v[0] - 6.0).abs() < 1e-5, "{}", v[0]);
        assert_eq!(&v[1..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn rr_exact_expectation() {
        // Σ_y P(y) v̂(y) = Σ a_i c_i with P(y) = (p - q) a_y + q.
        let mut rng = RngState::new(3, 0).rng();
        for ps in [PointSet::simplex(7).unwrap(), PointSet::hadamard(15).unwrap(), PointSet::cross_polytope(5).unwrap()] {
            let v = random_in_ball(ps.dim(), &mut rng);
            let a = encode(&ps, &v).unwrap().a;
            let eps = 0.7;
            let params = RrParams::new(eps, ps.len()).unwrap();
            let mut mean = vec![0.0; ps.dim()];
            let mut total = 0.0;
            for y in 0..ps.len() {
                let py = (params.p - params.q) * a[y] + params.q;
                total += py;
                let msg = PrivateMessage {
                    mechanism: Mechanism::Rr,
                    family: ps.family(),
                    d: ps.dim(),
                    epsilon: eps as f32,
                    norm: 1.0,
                    payload: Payload::Index(y as u32),
                };
                let est = rr_dequantize(&ps, &msg).unwrap();
                mean.iter_mut().zip(&est).for_each(|(m, e)| *m += py * e);
            }
            assert!((total - 1.0).abs() < 1e-12);
            for (m, x) in mean.iter().zip(&v) {
                assert!((m - x).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rappor_exact_expectation() {
        // Enumerate all 2^m payloads for m = 8.
        let ps = PointSet::cross_polytope(4).unwrap();
        let v = [0.3, -0.4, 0.1, 0.2];
        let a = encode(&ps, &v).unwrap().a;
        let eps = 1.3;
        let p = RapporParams::new(eps).unwrap().p;
        let m = ps.len();
        let mut mean = [0.0; 4];
        let mut ey = vec![0.0; m];
        for mask in 0u32..(1 << m) {
            let bits: Vec<bool> = (0..m).map(|j| mask >> j & 1 == 1).collect();
            let prob: f64 = (0..m)
                .map(|i| {
                    a[i] * (0..m)
                        .map(|j| {
                            let flip = bits[j] != (j == i);
                            if flip { p } else { 1.0 - p }
                        })
                        .product::<f64>()
                })
                .sum();
            for j in 0..m {
                if bits[j] {
                    ey[j] += prob;
                }
            }
            let msg = PrivateMessage {
                mechanism: Mechanism::Rappor,
                family: Family::CrossPolytope,
                d: 4,
                epsilon: eps as f32,
                norm: 1.0,
                payload: Payload::Bits(bits),
            };
            let est = rappor_dequantize(&ps, &msg).unwrap();
            mean.iter_mut().zip(&est).for_each(|(s, e)| *s += prob * e);
        }
        for j in 0..m {
            assert!((ey[j] - (p + (1.0 - 2.0 * p) * a[j])).abs() < 1e-12);
        }
        for (s, x) in mean.iter().zip(&v) {
            assert!((s - x).abs() < 1e-9);
        }
    }

    #[test]
    fn rappor_noiseless_symmetric() {
        let ps = PointSet::cross_polytope(4).unwrap();
        let eps = 2.0 * 3f64.ln();
        let mut bits = vec![false; 8];
        bits[2] = true;
        let msg = PrivateMessage {
            mechanism: Mechanism::Rappor,
            family: Family::CrossPolytope,
            d: 4,
            epsilon: eps as f32,
            norm: 1.0,
            payload: Payload::Bits(bits),
        };
        let p = RapporParams::new(eps).unwrap().p;
        let v = rappor_dequantize(&ps, &msg).unwrap();
        assert!((v[2] - 2.0 / (1.0 - 2.0 * p)).abs() < 1e-12);
        assert!((v[2] - 4.0).abs() < 1e-6);
    }

    #[test]
    fn large_epsilon_keeps_index() {
        let ps = PointSet::simplex(6).unwrap();
        let mut rng = RngState::new(5, 0).rng();
        let g = [0.1, 0.2, 0.0, -0.3, 0.0, 0.05];
        for _ in 0..200 {
            let m = rappor_privatize(&ps, &g, 50.0, &mut rng).unwrap();
            let Payload::Bits(b) = &m.payload else { unreachable!() };
            assert_eq!(b.iter().filter(|&&x| x).count(), 1);
        }
    }

    #[test]
    fn rr_keep_rate() {
        let ps = PointSet::cross_polytope(2).unwrap();
        let params = RrParams::new(1.0, 4).unwrap();
        let mut rng = RngState::new(9, 0).rng();
        let n = 100_000;
        let kept = (0..n).filter(|_| rr_flip(1, &params, &mut rng) == 1).count();
        let sigma = (params.p * (1.0 - params.p) / n as f64).sqrt();
        assert!((kept as f64 / n as f64 - params.p).abs() < 4.0 * sigma);
        let _ = ps;
    }

    #[test]
    fn mechanism_mismatch() {
        let ps = PointSet::cross_polytope(3).unwrap();
        let mut rng = RngState::new(0, 0).rng();
        let m = rr_privatize(&ps, &[1.0, 0.0, 0.0], 1.0, &mut rng).unwrap();
        assert!(matches!(rappor_dequantize(&ps, &m), Err(Error::Mismatch(_))));
        assert!(private_dequantize(&ps, &m).is_ok());
    }

    #[test]
    fn rappor_cap() {
        let ps = PointSet::cross_polytope(40_000).unwrap();
        let mut rng = RngState::new(0, 0).rng();
        let g = vec![0.0; 40_000];
        assert!(matches!(rappor_privatize(&ps, &g, 1.0, &mut rng), Err(Error::CardinalityOverflow { .. })));
    }

    #[test]
    fn private_wire_round_trip() {
        let ps = PointSet::simplex(10).unwrap();
        let mut rng = RngState::new(2, 0).rng();
        let g: Vec<f64> = (0..10).map(|i| i as f64 - 4.5).collect();
        for msg in [
            rr_privatize(&ps, &g, 1.5, &mut rng).unwrap(),
            rappor_privatize(&ps, &g, 1.5, &mut rng).unwrap(),
        ] {
            let b = msg.to_bytes();
            let (back, used) = PrivateMessage::from_bytes(&b, ps.len()).unwrap();
            assert_eq!(used, b.len());
            assert_eq!(back, msg);
        }
        let rap = rappor_privatize(&ps, &g, 1.5, &mut rng).unwrap();
        assert_eq!(rap.to_bytes().len(), 19 + 2);
        let mut bad = rap.to_bytes();
        bad[1] = b'Z';
        assert!(PrivateMessage::from_bytes(&bad, 11).is_err());
    }

    #[test]
    fn audit_finds_known_extremes() {
        let sx = audit_dp_ratio(&PointSet::simplex(16).unwrap(), 200, RngState::new(1, 0), Execution::Parallel).unwrap();
        assert!(sx.max_ratio <= 7.0 && sx.max_ratio > 6.0, "{}", sx.max_ratio);
        assert!(norm2(&sx.x) <= 1.0 + 1e-12 && norm2(&sx.y) <= 1.0 + 1e-12);
        let scp = audit_dp_ratio(&PointSet::scaled_cross_polytope(16).unwrap(), 50, RngState::new(1, 0), Execution::Sequential).unwrap();
        assert!((scp.max_ratio - (8.0 + 2.0 - 0.25)).abs() < 1e-9, "{}", scp.max_ratio);
        let cp = audit_dp_ratio(&PointSet::cross_polytope(4).unwrap(), 10, RngState::new(1, 0), Execution::Parallel).unwrap();
        assert!(cp.max_ratio.is_infinite());
        let had = audit_dp_ratio(&PointSet::hadamard(15).unwrap(), 10, RngState::new(1, 0), Execution::Parallel).unwrap();
        assert!((had.max_ratio - 3.0).abs() < 1e-9, "{}", had.max_ratio);
    }

    #[test]
    fn audit_is_schedule_independent() {
        let ps = PointSet::simplex(8).unwrap();
        let a = audit_dp_ratio(&ps, 500, RngState::new(4, 0), Execution::Sequential).unwrap();
        let b = audit_dp_ratio(&ps, 500, RngState::new(4, 0), Execution::Parallel).unwrap();
        assert_eq!(a.max_ratio.to_bits(), b.max_ratio.to_bits());
        assert_eq!(a.x, b.x);
    }
}

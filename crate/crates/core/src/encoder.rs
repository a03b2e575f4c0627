//! Convex decompositions `v = Σ a_i c_i` over a point set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hadamard::{fwht, is_power_of_two};
use crate::linalg::{dot, norm2};
use crate::pointset::{Family, PointSet};

/// Coefficients below zero but above this floor are roundoff and get clamped.
pub const CLAMP_FLOOR: f64 = -1e-12;
/// Inputs with norm up to `1 + BALL_SLACK` are accepted and rescaled.
pub const BALL_SLACK: f64 = 1e-9;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 50_000;

/// Convex coefficients over the points of a set, in decode order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffVector {
    pub a: Vec<f64>,
    pub d: usize,
    pub family: Family,
}

impl CoeffVector {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.a.iter().sum()
    }

    /// Clamps roundoff negatives to zero and renormalizes.
    fn finalize(mut a: Vec<f64>, d: usize, family: Family) -> Result<Self> {
        let mut clamped = false;
        for (index, x) in a.iter_mut().enumerate() {
            if *x < CLAMP_FLOOR || !x.is_finite() {
                return Err(Error::NegativeCoefficient { index, value: *x });
            }
            if *x < 0.0 {
                *x = 0.0;
                clamped = true;
            }
        }
        if clamped {
            let s: f64 = a.iter().sum();
            a.iter_mut().for_each(|x| *x /= s);
        }
        Ok(Self { a, d, family })
    }
}

/// Rejects non-finite or out-of-ball inputs; rescales norms within the slack.
fn ball_input(v: &[f64]) -> Result<std::borrow::Cow<'_, [f64]>> {
    if v.is_empty() {
        return Err(Error::InvalidDimension { d: 0, reason: "must be at least 1" });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGradient);
    }
    let n = norm2(v);
    if n > 1.0 + BALL_SLACK {
        return Err(Error::BallViolation { norm: n });
    }
    if n > 1.0 {
        Ok(v.iter().map(|x| x / n).collect::<Vec<_>>().into())
    } else {
        Ok(v.into())
    }
}

/// Cross-polytope decomposition; `scaled` selects the `±2√d e_i` set.
pub fn encode_cross_polytope(v: &[f64], scaled: bool) -> Result<CoeffVector> {
    let v = ball_input(v)?;
    let d = v.len();
    let df = d as f64;
    let mag = if scaled { 2.0 * df.sqrt() } else { df.sqrt() };
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    let gamma = 1.0 - l1 / mag;
    let base = gamma / (2.0 * df);
    let mut a = vec![base; 2 * d];
    for (i, &x) in v.iter().enumerate() {
        if x > 0.0 {
            a[i] += x / mag;
        } else if x < 0.0 {
            a[d + i] += -x / mag;
        }
    }
    let family = if scaled { Family::ScaledCrossPolytope } else { Family::CrossPolytope };
    CoeffVector::finalize(a, d, family)
}

/// Simplex decomposition; `a[0]` belongs to the point `-4·1`.
pub fn encode_simplex(v: &[f64]) -> Result<CoeffVector> {
    let v = ball_input(v)?;
    let d = v.len();
    if d < 2 {
        return Err(Error::InvalidDimension { d, reason: "simplex needs d >= 2" });
    }
    let df = d as f64;
    let a0 = 1.0 / 3.0 - v.iter().sum::<f64>() / (6.0 * df);
    let mut a = Vec::with_capacity(d + 1);
    a.push(a0);
    a.extend(v.iter().map(|x| x / (2.0 * df) + 2.0 * a0 / df));
    CoeffVector::finalize(a, d, Family::Simplex)
}

/// Hadamard decomposition via one fast transform of `[1; v / 2√d]`.
pub fn encode_hadamard(v: &[f64]) -> Result<CoeffVector> {
    let d = v.len();
    if d < 3 || !is_power_of_two(d + 1) {
        return Err(Error::DimensionConstraint {
            d,
            family: "hadamard",
            requirement: "d + 1 a power of two, d >= 3",
        });
    }
    let v = ball_input(v)?;
    let n = d + 1;
    let scale = 1.0 / (2.0 * (d as f64).sqrt());
    let mut buf = Vec::with_capacity(n);
    buf.push(1.0);
    buf.extend(v.iter().map(|x| x * scale));
    fwht(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|x| *x *= inv);
    CoeffVector::finalize(buf, d, Family::Hadamard)
}

/// Reed-Muller decomposition: signed coefficients `δ = Hv / d` split over
/// `±` rows, with the slack spread uniformly.
pub fn encode_reed_muller(v: &[f64]) -> Result<CoeffVector> {
    let d = v.len();
    if !is_power_of_two(d) {
        return Err(Error::DimensionConstraint {
            d,
            family: "reed-muller",
            requirement: "d a power of two",
        });
    }
    let v = ball_input(v)?;
    let df = d as f64;
    let mut delta = v.to_vec();
    fwht(&mut delta);
    delta.iter_mut().for_each(|x| *x /= df);
    let l1: f64 = delta.iter().map(|x| x.abs()).sum();
    let beta = (1.0 - l1) / (2.0 * df);
    let mut a = vec![beta; 2 * d];
    for (i, &x) in delta.iter().enumerate() {
        if x > 0.0 {
            a[i] += x;
        } else {
            a[d + i] += -x;
        }
    }
    CoeffVector::finalize(a, d, Family::ReedMuller)
}

/// Iterative decomposition for arbitrary sets: pairwise Frank-Wolfe with
/// exact line search on `‖Σ a_i c_i - v‖²` over the probability simplex,
/// started from the uniform vector.
pub fn encode_iterative(ps: &PointSet, v: &[f64], max_iters: usize, tol: f64) -> Result<CoeffVector> {
    let d = ps.dim();
    if v.len() != d {
        return Err(Error::LengthMismatch { expected: d, got: v.len() });
    }
    let v = ball_input(v)?;
    let m = ps.len();
    let mut a = vec![1.0 / m as f64; m];
    let residual_of = |a: &[f64]| -> Vec<f64> {
        let mut r: Vec<f64> = v.iter().map(|x| -x).collect();
        for (i, &ai) in a.iter().enumerate() {
            if ai != 0.0 {
                ps.accumulate(i, ai, &mut r);
            }
        }
        r
    };
    let mut r = residual_of(&a);
    let mut u = vec![0.0; d];
    let mut iters = 0;
    while iters < max_iters {
        if iters % 256 == 0 {
            r = residual_of(&a);
        }
        if norm2(&r) <= tol * 0.5 {
            break;
        }
        // toward: most negative gradient; away: most positive among the support
        let mut s = (0, f64::INFINITY);
        let mut w = (usize::MAX, f64::NEG_INFINITY);
        for i in 0..m {
            let g = ps.inner(i, &r);
            if g < s.1 {
                s = (i, g);
            }
            if a[i] > 0.0 && g > w.1 {
                w = (i, g);
            }
        }
        let (si, wi) = (s.0, w.0);
        if si == wi || w.1 - s.1 <= 0.0 {
            break;
        }
        u.iter_mut().for_each(|x| *x = 0.0);
        ps.accumulate(si, 1.0, &mut u);
        ps.accumulate(wi, -1.0, &mut u);
        let uu = dot(&u, &u);
        if uu == 0.0 {
            break;
        }
        let step = ((w.1 - s.1) / uu).min(a[wi]);
        if step <= 0.0 {
            break;
        }
        if step >= a[wi] {
            a[si] += a[wi];
            a[wi] = 0.0;
        } else {
            a[wi] -= step;
            a[si] += step;
        }
        r.iter_mut().zip(&u).for_each(|(ri, ui)| *ri += step * ui);
        iters += 1;
    }
    let residual = norm2(&residual_of(&a));
    if residual > tol {
        return Err(Error::NoConvergence { residual, iters });
    }
    CoeffVector::finalize(a, d, ps.family())
}

/// Decomposes `v` over `ps`, dispatching to the closed form when one exists.
/// `v` must have the set's internal dimension.
pub fn encode(ps: &PointSet, v: &[f64]) -> Result<CoeffVector> {
    if v.len() != ps.dim() {
        return Err(Error::LengthMismatch { expected: ps.dim(), got: v.len() });
    }
    match ps.family() {
        Family::CrossPolytope => encode_cross_polytope(v, false),
        Family::ScaledCrossPolytope => encode_cross_polytope(v, true),
        Family::Simplex => encode_simplex(v),
        Family::Hadamard => encode_hadamard(v),
        Family::ReedMuller => encode_reed_muller(v),
        Family::Gaussian | Family::EpsNet => encode_iterative(ps, v, DEFAULT_MAX_ITERS, DEFAULT_TOL),
    }
}

/// Zero-pads `v` to the family's next valid dimension. Returns the padded
/// vector and the original dimension.
pub fn pad_to_valid(v: &[f64], family: Family) -> (Vec<f64>, usize) {
    let d = v.len();
    let mut out = v.to_vec();
    out.resize(family.padded_dim(d), 0.0);
    (out, d)
}

/// `Σ a_i c_i`.
pub fn reconstruct(ps: &PointSet, a: &CoeffVector) -> Result<Vec<f64>> {
    if a.len() != ps.len() {
        return Err(Error::LengthMismatch { expected: ps.len(), got: a.len() });
    }
    let mut out = vec![0.0; ps.dim()];
    for (i, &ai) in a.a.iter().enumerate() {
        if ai != 0.0 {
            ps.accumulate(i, ai, &mut out);
        }
    }
    Ok(out)
}

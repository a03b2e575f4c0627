//! Structured point sets whose convex hull contains the unit ball.
//!
//! Structured families decode points from closed forms and never
//! materialize the full point list; the Gaussian and ε-net families keep an
//! explicit row-major point matrix.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::sphere_grid;
use crate::hadamard::{is_power_of_two, sylvester_entry};
use crate::rng::RngState;

/// Point-set family. The discriminant is the one-byte wire id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Family {
    #[serde(rename = "cp")]
    CrossPolytope = 0,
    #[serde(rename = "scp")]
    ScaledCrossPolytope = 1,
    #[serde(rename = "simplex")]
    Simplex = 2,
    #[serde(rename = "hadamard")]
    Hadamard = 3,
    #[serde(rename = "rm")]
    ReedMuller = 4,
    #[serde(rename = "gauss")]
    Gaussian = 5,
    #[serde(rename = "epsnet")]
    EpsNet = 6,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::CrossPolytope,
        Family::ScaledCrossPolytope,
        Family::Simplex,
        Family::Hadamard,
        Family::ReedMuller,
        Family::Gaussian,
        Family::EpsNet,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Result<Self> {
        Family::ALL
            .get(id as usize)
            .copied()
            .ok_or_else(|| Error::Wire(format!("unknown family id {id}")))
    }

    /// Short name used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            Family::CrossPolytope => "cp",
            Family::ScaledCrossPolytope => "scp",
            Family::Simplex => "simplex",
            Family::Hadamard => "hadamard",
            Family::ReedMuller => "rm",
            Family::Gaussian => "gauss",
            Family::EpsNet => "epsnet",
        }
    }

    /// Families that store their points explicitly.
    pub fn is_explicit(self) -> bool {
        matches!(self, Family::Gaussian | Family::EpsNet)
    }

    /// Families with a closed-form decomposition.
    pub fn has_closed_form(self) -> bool {
        !self.is_explicit()
    }

    /// Smallest internal dimension `>= d` the family accepts.
    pub fn padded_dim(self, d: usize) -> usize {
        match self {
            Family::Hadamard => (d + 1).next_power_of_two().max(4) - 1,
            Family::ReedMuller => d.next_power_of_two(),
            _ => d,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.short_name() == s)
            .ok_or_else(|| Error::ParameterRange(format!("unknown family '{s}'")))
    }
}

/// Parameters of the random Gaussian construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub radius: f64,
    pub seed: u64,
    /// Replaces the theoretical cardinality when set.
    pub cardinality_override: Option<usize>,
    /// Constant in the exponent of `t = exp(c d / R^2 + 2 ln d)`.
    pub exponent_constant: f64,
    /// Upper bound on the number of stored points.
    pub max_points: usize,
}

impl GaussianParams {
    pub fn new(radius: f64, seed: u64) -> Self {
        Self {
            radius,
            seed,
            cardinality_override: None,
            exponent_constant: 20.0,
            max_points: 2_000_000,
        }
    }

    pub fn with_override(mut self, m: usize) -> Self {
        self.cardinality_override = Some(m);
        self
    }
}

/// Theoretical size `exp(c d / R^2 + 2 ln d)` of the Gaussian construction
/// (before rounding up).
pub fn gaussian_cardinality(d: usize, radius: f64, exponent_constant: f64) -> f64 {
    let d = d as f64;
    (exponent_constant * d / (radius * radius) + 2.0 * d.ln()).exp()
}

/// Declarative description of a point set, as found in config files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetSpec {
    pub family: Family,
    /// Gaussian radius; defaults to `max(5, 6√d)`.
    #[serde(default)]
    pub radius: Option<f64>,
    /// Gaussian cardinality override.
    #[serde(default)]
    pub points: Option<usize>,
    /// ε-net family parameter; defaults to 0.1.
    #[serde(default)]
    pub net_eps: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl PointSetSpec {
    pub fn new(family: Family) -> Self {
        Self { family, radius: None, points: None, net_eps: None, seed: 0 }
    }

    /// Builds the set for inputs of dimension `d`.
    pub fn build(&self, d: usize) -> Result<PointSet> {
        match self.family {
            Family::Gaussian => {
                let radius = self.radius.unwrap_or_else(|| (6.0 * (d as f64).sqrt()).max(5.0));
                let mut p = GaussianParams::new(radius, self.seed);
                p.cardinality_override = self.points;
                PointSet::gaussian(d, &p)
            }
            Family::EpsNet => PointSet::eps_net(d, self.net_eps.unwrap_or(0.1)),
            f => PointSet::for_input_dim(f, d),
        }
    }
}

/// An immutable point set `C` in `R^dim`.
#[derive(Clone, Debug)]
pub struct PointSet {
    family: Family,
    dim: usize,
    input_dim: usize,
    m: usize,
    radius: f64,
    points: Option<Arc<[f64]>>,
    point_sum: Option<Arc<[f64]>>,
}

impl PointSet {
    fn structured(family: Family, dim: usize, m: usize, radius: f64) -> Self {
        Self {
            family,
            dim,
            input_dim: dim,
            m,
            radius,
            points: None,
            point_sum: None,
        }
    }

    fn explicit(family: Family, dim: usize, points: Vec<f64>, radius: f64) -> Self {
        debug_assert_eq!(points.len() % dim, 0);
        let m = points.len() / dim;
        let mut sum = vec![0.0; dim];
        for row in points.chunks_exact(dim) {
            for (s, x) in sum.iter_mut().zip(row) {
                *s += x;
            }
        }
        Self {
            family,
            dim,
            input_dim: dim,
            m,
            radius,
            points: Some(points.into()),
            point_sum: Some(sum.into()),
        }
    }

    /// `{ ±√d e_i }`, circumradius `√d`.
    pub fn cross_polytope(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension { d, reason: "must be at least 1" });
        }
        Ok(Self::structured(Family::CrossPolytope, d, 2 * d, (d as f64).sqrt()))
    }

    /// `{ ±2√d e_i }`, circumradius `2√d`.
    pub fn scaled_cross_polytope(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension { d, reason: "must be at least 1" });
        }
        Ok(Self::structured(
            Family::ScaledCrossPolytope,
            d,
            2 * d,
            2.0 * (d as f64).sqrt(),
        ))
    }

    /// `{ -4·1 } ∪ { 2d e_i }`; index 0 is the all-(-4) point.
    ///
    /// The circumradius is `max(2d, 4√d)`: for `d < 4` the point `-4·1`
    /// lies outside the ball of radius `2d`.
    pub fn simplex(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension { d, reason: "simplex needs d >= 2" });
        }
        let df = d as f64;
        let radius = (2.0 * df).max(4.0 * df.sqrt());
        Ok(Self::structured(Family::Simplex, d, d + 1, radius))
    }

    /// `{ 2√d h_i }` with `h_i` the i-th Sylvester column with its first
    /// coordinate punctured. Requires `d + 1` to be a power of two.
    pub fn hadamard(d: usize) -> Result<Self> {
        if d < 3 || !is_power_of_two(d + 1) {
            return Err(Error::DimensionConstraint {
                d,
                family: "hadamard",
                requirement: "d + 1 a power of two, d >= 3",
            });
        }
        Ok(Self::structured(Family::Hadamard, d, d + 1, 2.0 * d as f64))
    }

    /// Rows of `[H; -H]`: the first-order Reed-Muller codewords under
    /// `b -> (-1)^b`. Requires `d` to be a power of two.
    pub fn reed_muller(d: usize) -> Result<Self> {
        if !is_power_of_two(d) {
            return Err(Error::DimensionConstraint {
                d,
                family: "reed-muller",
                requirement: "d a power of two",
            });
        }
        Ok(Self::structured(Family::ReedMuller, d, 2 * d, (d as f64).sqrt()))
    }

    /// Random construction: i.i.d. `N(0, R^2 / 9d)` coordinates.
    pub fn gaussian(d: usize, params: &GaussianParams) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension { d, reason: "must be at least 1" });
        }
        let r = params.radius;
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::ParameterRange(format!("radius {r} must be positive")));
        }
        let m = match params.cardinality_override {
            Some(0) => return Err(Error::ParameterRange("cardinality override must be positive".into())),
            Some(m) => m,
            None => {
                let hi = 6.0 * (d as f64).sqrt();
                if !(5.0..=hi).contains(&r) {
                    return Err(Error::ParameterRange(format!(
                        "radius {r} outside [5, {hi:.4}] and no cardinality override"
                    )));
                }
                let t = gaussian_cardinality(d, r, params.exponent_constant).ceil();
                if !t.is_finite() || t > params.max_points as f64 {
                    return Err(Error::CardinalityOverflow { requested: t, cap: params.max_points });
                }
                t as usize
            }
        };
        if m > params.max_points {
            return Err(Error::CardinalityOverflow { requested: m as f64, cap: params.max_points });
        }
        let sigma = r / (3.0 * (d as f64).sqrt());
        let normal = Normal::new(0.0, sigma).expect("sigma is positive and finite");
        let mut rng = RngState::new(params.seed, 0).rng();
        let points: Vec<f64> = (0..m * d).map(|_| normal.sample(&mut rng)).collect();
        Ok(Self::explicit(Family::Gaussian, d, points, r))
    }

    /// A deterministic ε-net of the sphere scaled by `1 / (1 - eps)`.
    pub fn eps_net(d: usize, eps: f64) -> Result<Self> {
        if !(2..=3).contains(&d) {
            return Err(Error::UnsupportedDimension { d, family: "eps-net (d in {2, 3})" });
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::ParameterRange(format!("eps {eps} must lie in (0, 1)")));
        }
        let scale = 1.0 / (1.0 - eps);
        let points: Vec<f64> = sphere_grid(d, eps).into_iter().map(|x| x * scale).collect();
        Ok(Self::explicit(Family::EpsNet, d, points, scale * (1.0 + 1e-12)))
    }

    /// Builds a structured family for inputs of dimension `d`, padding the
    /// internal dimension where the family demands it.
    pub fn for_input_dim(family: Family, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension { d, reason: "must be at least 1" });
        }
        let dim = family.padded_dim(d);
        let mut ps = match family {
            Family::CrossPolytope => Self::cross_polytope(dim)?,
            Family::ScaledCrossPolytope => Self::scaled_cross_polytope(dim)?,
            Family::Simplex => Self::simplex(dim)?,
            Family::Hadamard => Self::hadamard(dim)?,
            Family::ReedMuller => Self::reed_muller(dim)?,
            Family::Gaussian | Family::EpsNet => {
                return Err(Error::ParameterRange(format!(
                    "{family} needs explicit construction parameters"
                )))
            }
        };
        ps.input_dim = d;
        Ok(ps)
    }

    /// Wraps an arbitrary explicit point list (row-major, `m x d`). The
    /// radius is the largest point norm.
    pub fn from_points(family: Family, d: usize, points: Vec<f64>) -> Result<Self> {
        if d == 0 || points.is_empty() || !points.len().is_multiple_of(d) {
            return Err(Error::LengthMismatch { expected: d, got: points.len() });
        }
        let radius = points
            .chunks_exact(d)
            .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        Ok(Self::explicit(family, d, points, radius))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Dimension of the space the points live in.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Caller-facing dimension; smaller than [`dim`](Self::dim) when padded.
    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn is_padded(&self) -> bool {
        self.input_dim != self.dim
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Row-major point matrix for explicit families.
    pub fn explicit_points(&self) -> Option<&[f64]> {
        self.points.as_deref()
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.m {
            Err(Error::IndexOutOfRange { index, m: self.m })
        } else {
            Ok(())
        }
    }

    /// The point `c_index`.
    pub fn decode(&self, index: usize) -> Result<Vec<f64>> {
        self.check_index(index)?;
        let mut out = vec![0.0; self.dim];
        self.accumulate(index, 1.0, &mut out);
        Ok(out)
    }

    /// `out += scale * c_index`. Panics on an invalid index.
    pub fn accumulate(&self, index: usize, scale: f64, out: &mut [f64]) {
        assert!(index < self.m, "point index {index} out of range");
        debug_assert_eq!(out.len(), self.dim);
        let d = self.dim;
        let df = d as f64;
        match self.family {
            Family::CrossPolytope | Family::ScaledCrossPolytope => {
                let mag = if self.family == Family::CrossPolytope {
                    df.sqrt()
                } else {
                    2.0 * df.sqrt()
                };
                if index < d {
                    out[index] += scale * mag;
                } else {
                    out[index - d] -= scale * mag;
                }
            }
            Family::Simplex => {
                if index == 0 {
                    out.iter_mut().for_each(|o| *o -= scale * 4.0);
                } else {
                    out[index - 1] += scale * 2.0 * df;
                }
            }
            Family::Hadamard => {
                let mag = scale * 2.0 * df.sqrt();
                for (k, o) in out.iter_mut().enumerate() {
                    *o += mag * sylvester_entry(k + 1, index);
                }
            }
            Family::ReedMuller => {
                let (row, sign) = if index < d { (index, scale) } else { (index - d, -scale) };
                for (k, o) in out.iter_mut().enumerate() {
                    *o += sign * sylvester_entry(row, k);
                }
            }
            Family::Gaussian | Family::EpsNet => {
                let pts = self.points.as_deref().expect("explicit family stores points");
                for (o, c) in out.iter_mut().zip(&pts[index * d..(index + 1) * d]) {
                    *o += scale * c;
                }
            }
        }
    }

    /// `<c_index, x>`.
    pub fn inner(&self, index: usize, x: &[f64]) -> f64 {
        assert!(index < self.m, "point index {index} out of range");
        let d = self.dim;
        let df = d as f64;
        match self.family {
            Family::CrossPolytope | Family::ScaledCrossPolytope => {
                let mag = if self.family == Family::CrossPolytope { df.sqrt() } else { 2.0 * df.sqrt() };
                if index < d {
                    mag * x[index]
                } else {
                    -mag * x[index - d]
                }
            }
            Family::Simplex => {
                if index == 0 {
                    -4.0 * x.iter().sum::<f64>()
                } else {
                    2.0 * df * x[index - 1]
                }
            }
            Family::Hadamard => {
                2.0 * df.sqrt()
                    * x.iter()
                        .enumerate()
                        .map(|(k, v)| sylvester_entry(k + 1, index) * v)
                        .sum::<f64>()
            }
            Family::ReedMuller => {
                let (row, sign) = if index < d { (index, 1.0) } else { (index - d, -1.0) };
                sign * x
                    .iter()
                    .enumerate()
                    .map(|(k, v)| sylvester_entry(row, k) * v)
                    .sum::<f64>()
            }
            Family::Gaussian | Family::EpsNet => {
                let pts = self.points.as_deref().expect("explicit family stores points");
                pts[index * d..(index + 1) * d]
                    .iter()
                    .zip(x)
                    .map(|(c, v)| c * v)
                    .sum()
            }
        }
    }

    /// `‖c_index‖²`.
    pub fn sq_norm(&self, index: usize) -> f64 {
        assert!(index < self.m, "point index {index} out of range");
        let df = self.dim as f64;
        match self.family {
            Family::CrossPolytope | Family::ReedMuller => df,
            Family::ScaledCrossPolytope => 4.0 * df,
            Family::Simplex => {
                if index == 0 {
                    16.0 * df
                } else {
                    4.0 * df * df
                }
            }
            Family::Hadamard => 4.0 * df * df,
            Family::Gaussian | Family::EpsNet => {
                let d = self.dim;
                let pts = self.points.as_deref().expect("explicit family stores points");
                pts[index * d..(index + 1) * d].iter().map(|c| c * c).sum()
            }
        }
    }

    /// `Σ_i c_i`.
    pub fn point_sum(&self) -> Vec<f64> {
        match (&self.point_sum, self.family) {
            (Some(s), _) => s.to_vec(),
            (None, Family::Simplex) => vec![2.0 * self.dim as f64 - 4.0; self.dim],
            // Symmetric sets, and the punctured Hadamard columns (rows 2.. of
            // H sum to zero over columns).
            (None, _) => vec![0.0; self.dim],
        }
    }

    /// `(argmax_i <x, c_i>, max_i <x, c_i>)`.
    pub fn max_inner(&self, x: &[f64]) -> (usize, f64) {
        debug_assert_eq!(x.len(), self.dim);
        match self.family {
            Family::CrossPolytope | Family::ScaledCrossPolytope => {
                let df = self.dim as f64;
                let mag = if self.family == Family::CrossPolytope { df.sqrt() } else { 2.0 * df.sqrt() };
                let (k, v) = x
                    .iter()
                    .enumerate()
                    .fold((0, 0.0f64), |(bk, bv), (k, v)| if v.abs() > bv { (k, v.abs()) } else { (bk, bv) });
                let idx = if x[k] >= 0.0 { k } else { k + self.dim };
                (idx, mag * v)
            }
            _ => {
                let mut best = (0, f64::NEG_INFINITY);
                for i in 0..self.m {
                    let v = self.inner(i, x);
                    if v > best.1 {
                        best = (i, v);
                    }
                }
                best
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn cross_polytope_decoding() {
        let ps = PointSet::cross_polytope(4).unwrap();
        assert_eq!(ps.decode(0).unwrap(), vec![2.0, 0.0, 0.0, 0.0]);
        assert_eq!(ps.decode(5).unwrap(), vec![0.0, -2.0, 0.0, 0.0]);
        assert_eq!(ps.radius(), 2.0);
        assert_eq!(ps.len(), 8);
        let ps3 = PointSet::cross_polytope(3).unwrap();
        assert_eq!(ps3.decode(4).unwrap(), vec![0.0, -(3f64).sqrt(), 0.0]);
        assert!(matches!(PointSet::cross_polytope(0), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn scaled_cross_polytope_decoding() {
        let ps = PointSet::scaled_cross_polytope(4).unwrap();
        assert_eq!(ps.decode(0).unwrap(), vec![4.0, 0.0, 0.0, 0.0]);
        assert_eq!(ps.decode(7).unwrap(), vec![0.0, 0.0, 0.0, -4.0]);
        assert_eq!(PointSet::scaled_cross_polytope(9).unwrap().radius(), 6.0);
        assert!(PointSet::scaled_cross_polytope(0).is_err());
    }

    #[test]
    fn simplex_decoding() {
        let ps = PointSet::simplex(4).unwrap();
        assert_eq!(ps.decode(0).unwrap(), vec![-4.0; 4]);
        assert_eq!(ps.decode(1).unwrap(), vec![8.0, 0.0, 0.0, 0.0]);
        assert_eq!(ps.radius(), 8.0);
        assert_eq!(ps.len(), 5);
        assert_eq!(PointSet::simplex(2).unwrap().decode(0).unwrap(), vec![-4.0, -4.0]);
        assert!(matches!(PointSet::simplex(1), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn hadamard_decoding() {
        let ps = PointSet::hadamard(3).unwrap();
        let s = 2.0 * 3f64.sqrt();
        assert!(close(&ps.decode(0).unwrap(), &[s, s, s], 1e-15));
        assert!(close(&ps.decode(1).unwrap(), &[-s, s, -s], 1e-15));
        assert_eq!(ps.radius(), 6.0);
        assert!(matches!(PointSet::hadamard(5), Err(Error::DimensionConstraint { .. })));
    }

    #[test]
    fn reed_muller_decoding() {
        let ps = PointSet::reed_muller(2).unwrap();
        assert_eq!(ps.decode(0).unwrap(), vec![1.0, 1.0]);
        assert_eq!(ps.decode(2).unwrap(), vec![-1.0, -1.0]);
        let ps4 = PointSet::reed_muller(4).unwrap();
        assert_eq!((ps4.len(), ps4.radius()), (8, 2.0));
        assert!(matches!(PointSet::reed_muller(6), Err(Error::DimensionConstraint { .. })));
    }

    #[test]
    fn gaussian_cardinality_formula() {
        // ceil(e^{20*16/64} * 16^2) = ceil(256 e^5) = ceil(37993.77)
        let t = gaussian_cardinality(16, 8.0, 20.0);
        assert!((t - 256.0 * 5f64.exp()).abs() < 1e-6);
        assert_eq!(t.ceil() as usize, 37994);
    }

    #[test]
    fn gaussian_construction() {
        let p = GaussianParams::new(8.0, 11).with_override(40_000);
        let ps = PointSet::gaussian(16, &p).unwrap();
        assert_eq!(ps.len(), 40_000);
        let pts = ps.explicit_points().unwrap();
        let n = pts.len() as f64;
        let mean = pts.iter().sum::<f64>() / n;
        let var = pts.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        // sigma^2 = 64/144; standard error of the variance ~ sigma^2 sqrt(2/n)
        let target = 64.0 / 144.0;
        assert!((var - target).abs() < 4.0 * target * (2.0 / n).sqrt(), "var {var}");
        let again = PointSet::gaussian(16, &p).unwrap();
        assert_eq!(again.explicit_points().unwrap(), pts);
        assert_eq!(ps.decode(17).unwrap(), pts[17 * 16..18 * 16].to_vec());
    }

    #[test]
    fn gaussian_range_and_cap() {
        assert!(matches!(
            PointSet::gaussian(16, &GaussianParams::new(3.0, 0)),
            Err(Error::ParameterRange(_))
        ));
        let mut p = GaussianParams::new(8.0, 0);
        p.max_points = 1000;
        assert!(matches!(PointSet::gaussian(16, &p), Err(Error::CardinalityOverflow { .. })));
        // Default cardinality for d=16, R=8 fits the default cap.
        let ps = PointSet::gaussian(16, &GaussianParams::new(8.0, 0)).unwrap();
        assert_eq!(ps.len(), 37994);
    }

    #[test]
    fn eps_net_construction() {
        let ps = PointSet::eps_net(2, 0.1).unwrap();
        assert_eq!(ps.len(), 63);
        for i in 0..ps.len() {
            assert!((ps.sq_norm(i).sqrt() - 1.0 / 0.9).abs() < 1e-12);
        }
        let half = PointSet::eps_net(2, 0.5).unwrap();
        assert!((half.sq_norm(0).sqrt() - 2.0).abs() < 1e-12);
        assert!(matches!(PointSet::eps_net(4, 0.1), Err(Error::UnsupportedDimension { .. })));
        assert!(PointSet::eps_net(3, 0.3).is_ok());
    }

    #[test]
    fn padded_construction() {
        let h = PointSet::for_input_dim(Family::Hadamard, 5).unwrap();
        assert_eq!((h.dim(), h.input_dim()), (7, 5));
        let rm = PointSet::for_input_dim(Family::ReedMuller, 5).unwrap();
        assert_eq!((rm.dim(), rm.input_dim()), (8, 5));
        let h3 = PointSet::for_input_dim(Family::Hadamard, 3).unwrap();
        assert!(!h3.is_padded());
    }

    #[test]
    fn index_errors() {
        let ps = PointSet::cross_polytope(3).unwrap();
        assert!(matches!(ps.decode(6), Err(Error::IndexOutOfRange { index: 6, m: 6 })));
    }

    #[test]
    fn family_ids_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_id(f.id()).unwrap(), f);
            assert_eq!(f.short_name().parse::<Family>().unwrap(), f);
        }
        assert!(Family::from_id(7).is_err());
    }

    fn structured_sets() -> Vec<PointSet> {
        vec![
            PointSet::cross_polytope(5).unwrap(),
            PointSet::scaled_cross_polytope(5).unwrap(),
            PointSet::simplex(2).unwrap(),
            PointSet::simplex(3).unwrap(),
            PointSet::simplex(6).unwrap(),
            PointSet::hadamard(7).unwrap(),
            PointSet::reed_muller(8).unwrap(),
            PointSet::eps_net(3, 0.4).unwrap(),
        ]
    }

    #[test]
    fn norms_within_radius_and_helpers_agree() {
        for ps in structured_sets() {
            let x: Vec<f64> = (0..ps.dim()).map(|i| (i as f64 * 0.37).sin()).collect();
            let mut sum = vec![0.0; ps.dim()];
            let mut best = f64::NEG_INFINITY;
            for i in 0..ps.len() {
                let c = ps.decode(i).unwrap();
                let n2: f64 = c.iter().map(|v| v * v).sum();
                assert!(n2.sqrt() <= ps.radius() + 1e-9, "{:?} point {i}", ps.family());
                assert!((n2 - ps.sq_norm(i)).abs() < 1e-9);
                let dot: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert!((dot - ps.inner(i, &x)).abs() < 1e-9);
                best = best.max(dot);
                sum.iter_mut().zip(&c).for_each(|(s, v)| *s += v);
            }
            assert!(close(&sum, &ps.point_sum(), 1e-9), "{:?}", ps.family());
            assert!((ps.max_inner(&x).1 - best).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_families_contain_negations() {
        for ps in [
            PointSet::cross_polytope(6).unwrap(),
            PointSet::scaled_cross_polytope(6).unwrap(),
            PointSet::reed_muller(8).unwrap(),
        ] {
            let half = ps.len() / 2;
            for i in 0..half {
                let c = ps.decode(i).unwrap();
                let neg: Vec<f64> = c.iter().map(|v| -v).collect();
                assert_eq!(ps.decode(i + half).unwrap(), neg);
            }
        }
    }

    #[test]
    fn hadamard_columns_complete_to_hadamard_matrix() {
        for d in [3usize, 7, 15] {
            let ps = PointSet::hadamard(d).unwrap();
            let n = d + 1;
            let scale = 2.0 * (d as f64).sqrt();
            // G: n x n, row i = (1, c_i / (2√d))
            let g: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let mut r = vec![1.0];
                    r.extend(ps.decode(i).unwrap().iter().map(|v| v / scale));
                    r
                })
                .collect();
            for a in 0..n {
                for b in 0..n {
                    let dot: f64 = (0..n).map(|i| g[i][a] * g[i][b]).sum();
                    let want = if a == b { n as f64 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn reed_muller_gram_is_scaled_identity() {
        let d = 16;
        let ps = PointSet::reed_muller(d).unwrap();
        let rows: Vec<Vec<f64>> = (0..d).map(|i| ps.decode(i).unwrap()).collect();
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                assert_eq!(dot, if i == j { d as f64 } else { 0.0 });
            }
        }
    }

    #[test]
    fn structured_decoding_is_deterministic() {
        let a = PointSet::hadamard(15).unwrap();
        let b = PointSet::hadamard(15).unwrap();
        for i in 0..a.len() {
            let (x, y) = (a.decode(i).unwrap(), b.decode(i).unwrap());
            assert!(x.iter().zip(&y).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }
}

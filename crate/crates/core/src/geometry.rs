//! Covering checks for `B(0,1) ⊆ conv(C)`, direction nets, and the
//! cardinality lower bound.
//!
//! The unit ball lies in `conv(C)` iff every unit `x` has some `c` with
//! `<x, c> >= 1`. On a finite set of directions that test is only a spot
//! check. On an ε-net it becomes a certificate once the threshold is raised
//! to `1 + ε R`: moving from a net point to any unit vector within `ε`
//! changes `<·, c>` by at most `ε ‖c‖ <= ε R`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{chunk_bounds, Execution};
use crate::pointset::{GaussianParams, PointSet};
use crate::rng::RngState;

/// Tolerance on the `>= 1` covering test.
pub const COVER_TOL: f64 = 1e-9;
/// Random nets never exceed this many directions.
pub const RANDOM_NET_CAP: usize = 1_000_000;

/// Uniform direction on the unit sphere.
pub fn random_unit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-300 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Uniform point in the closed unit ball.
pub fn random_in_ball<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let r = rng.random::<f64>().powf(1.0 / d as f64);
    random_unit(d, rng).into_iter().map(|x| x * r).collect()
}

/// Deterministic grid on the sphere in `d ∈ {2, 3}` whose covering radius
/// (Euclidean) is at most `eps`. Row-major unit vectors.
///
/// `d = 2`: `⌈π / asin(eps/2)⌉` equally spaced angles. `d = 3`: latitude
/// rings spaced by the angle `θ = 2 asin(eps/2)`, each ring holding enough
/// equally spaced points that every point is within geodesic `θ/2` of the
/// nearest ring and `θ/2` along it.
pub fn sphere_grid(d: usize, eps: f64) -> Vec<f64> {
    assert!((2..=3).contains(&d), "grid only for d in {{2, 3}}");
    assert!(eps > 0.0 && eps < 2.0, "eps must lie in (0, 2)");
    let theta = 2.0 * (eps / 2.0).asin();
    let mut out = Vec::new();
    if d == 2 {
        let n = (PI / (eps / 2.0).asin()).ceil() as usize;
        for j in 0..n {
            let a = 2.0 * PI * j as f64 / n as f64;
            out.extend([a.cos(), a.sin()]);
        }
        return out;
    }
    let k = (PI / theta).ceil().max(1.0) as usize;
    for ring in 0..=k {
        let phi = PI * ring as f64 / k as f64;
        let (sp, cp) = if ring == 0 {
            (0.0, 1.0)
        } else if ring == k {
            (0.0, -1.0)
        } else {
            (phi.sin(), phi.cos())
        };
        let n = if sp == 0.0 { 1 } else { ((2.0 * PI * sp / theta).ceil() as usize).max(1) };
        for j in 0..n {
            let lam = 2.0 * PI * j as f64 / n as f64;
            out.extend([sp * lam.cos(), sp * lam.sin(), cp]);
        }
    }
    out
}

/// A set of unit directions, possibly an ε-net.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionNet {
    pub d: usize,
    /// Covering radius when `certified`, the requested radius otherwise.
    pub eps: f64,
    /// True when the directions provably form an `eps`-net.
    pub certified: bool,
    /// Row-major unit vectors.
    pub directions: Vec<f64>,
}

impl DirectionNet {
    pub fn len(&self) -> usize {
        self.directions.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn direction(&self, i: usize) -> &[f64] {
        &self.directions[i * self.d..(i + 1) * self.d]
    }

    /// Wraps arbitrary directions as a non-certifying sample.
    pub fn from_directions(d: usize, dirs: &[Vec<f64>]) -> Result<Self> {
        let mut directions = Vec::with_capacity(d * dirs.len());
        for v in dirs {
            if v.len() != d {
                return Err(Error::LengthMismatch { expected: d, got: v.len() });
            }
            directions.extend_from_slice(v);
        }
        Ok(Self { d, eps: f64::NAN, certified: false, directions })
    }

    /// `n` uniform random directions.
    pub fn random(d: usize, n: usize, rng: RngState) -> Self {
        let mut r = rng.rng();
        let directions = (0..n).flat_map(|_| random_unit(d, &mut r)).collect();
        Self { d, eps: f64::NAN, certified: false, directions }
    }
}

/// Grid net for `d <= 3`; random sample of `min(cap, ⌈(3/eps)^d⌉)` directions
/// otherwise.
pub fn make_direction_net(d: usize, eps: f64, seed: u64) -> Result<DirectionNet> {
    make_direction_net_capped(d, eps, seed, RANDOM_NET_CAP)
}

pub fn make_direction_net_capped(d: usize, eps: f64, seed: u64, cap: usize) -> Result<DirectionNet> {
    if d < 2 {
        return Err(Error::InvalidDimension { d, reason: "direction nets need d >= 2" });
    }
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::ParameterRange(format!("net radius {eps} must lie in (0, 2)")));
    }
    if d <= 3 {
        return Ok(DirectionNet { d, eps, certified: true, directions: sphere_grid(d, eps) });
    }
    let want = (3.0 / eps).powi(d as i32).ceil();
    let n = if want >= cap as f64 { cap } else { want as usize };
    let mut net = DirectionNet::random(d, n, RngState::new(seed, 0));
    net.eps = eps;
    Ok(net)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CoverCriterion {
    /// `>= 1` on sampled directions; necessary evidence only.
    SpotCheck,
    /// `>= threshold = 1 + eps R` on an `eps`-net; sufficient.
    NetCertificate { eps: f64, threshold: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringReport {
    /// `min_x max_c <x, c>` over the tested directions.
    pub min_max_inner: f64,
    pub worst_direction: Vec<f64>,
    pub n_directions: usize,
    /// `min_max_inner >= 1 - 1e-9`.
    pub pass: bool,
    pub criterion: CoverCriterion,
    /// Whether the net certificate holds; false under a spot check.
    pub certified: bool,
}

/// Threshold at which an `eps`-net certifies covering for radius `r`.
pub fn certificate_threshold(eps: f64, r: f64) -> f64 {
    1.0 + eps * r
}

/// Evaluates `max_c <x, c>` for every direction and reports the minimum.
/// A certified net is also tested against the raised threshold.
pub fn verify_covering(ps: &PointSet, net: &DirectionNet, exec: Execution) -> Result<CoveringReport> {
    if net.is_empty() {
        return Err(Error::Empty("no directions"));
    }
    if net.d != ps.dim() {
        return Err(Error::LengthMismatch { expected: ps.dim(), got: net.d });
    }
    let n = net.len();
    for i in 0..n {
        let u = net.direction(i);
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::ParameterRange(format!("direction {i} has norm {norm}")));
        }
    }
    let chunks = chunk_bounds(n, 512);
    let mins = exec.map_range(chunks.len(), |c| {
        let (lo, hi) = chunks[c];
        let mut best = (f64::INFINITY, lo);
        for i in lo..hi {
            let v = ps.max_inner(net.direction(i)).1;
            if v < best.0 {
                best = (v, i);
            }
        }
        best
    });
    let (min_max_inner, worst) = mins
        .into_iter()
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    let pass = min_max_inner >= 1.0 - COVER_TOL;
    let (criterion, certified) = if net.certified {
        let threshold = certificate_threshold(net.eps, ps.radius());
        (CoverCriterion::NetCertificate { eps: net.eps, threshold }, min_max_inner >= threshold)
    } else {
        (CoverCriterion::SpotCheck, false)
    };
    Ok(CoveringReport {
        min_max_inner,
        worst_direction: net.direction(worst).to_vec(),
        n_directions: n,
        pass,
        criterion,
        certified,
    })
}

/// `log2` of the cardinality lower bound `exp(d / 32R²) / 2`, clamped at 0.
pub fn lower_bound_bits(d: usize, r: f64) -> Result<f64> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::ParameterRange(format!("radius {r} must be at least 1")));
    }
    Ok((d as f64 / (32.0 * r * r * std::f64::consts::LN_2) - 1.0).max(0.0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaussianCheck {
    pub m: usize,
    pub report: CoveringReport,
    /// Points with `‖c‖ > R`.
    pub norm_violations: usize,
}

/// Builds a Gaussian set and spot-checks covering on random directions.
pub fn check_gaussian_construction(
    d: usize,
    params: &GaussianParams,
    n_directions: usize,
    directions_rng: RngState,
    exec: Execution,
) -> Result<GaussianCheck> {
    let ps = PointSet::gaussian(d, params)?;
    let net = DirectionNet::random(d, n_directions, directions_rng);
    let report = verify_covering(&ps, &net, exec)?;
    let r2 = params.radius * params.radius;
    let norm_violations = (0..ps.len()).filter(|&i| ps.sq_norm(i) > r2).count();
    Ok(GaussianCheck { m: ps.len(), report, norm_violations })
}

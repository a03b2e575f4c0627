//! Vector-quantized stochastic gradients.
//!
//! A gradient `g` is sent as `‖g‖` plus the index of a point `c` drawn from
//! a fixed set `C` whose convex hull contains the unit ball, with
//! probabilities given by a convex decomposition of `g / ‖g‖`. The receiver
//! gets an unbiased estimate with variance bounded by the set's radius.
//!
//! ```
//! use vqsgd::{dequantize, quantize, PointSet, RngState};
//!
//! let ps = PointSet::cross_polytope(4).unwrap();
//! let mut rng = RngState::new(7, 0).rng();
//! let msg = quantize(&ps, &[0.5, -1.0, 0.0, 2.0], 4, &mut rng).unwrap();
//! let estimate = dequantize(&ps, &msg).unwrap();
//! assert_eq!(estimate.len(), 4);
//! ```

pub mod data_io;
pub mod encoder;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod hadamard;
pub mod linalg;
pub mod pointset;
pub mod privacy;
pub mod quantizer;
pub mod rng;
pub mod sgd_sim;

pub use encoder::{encode, CoeffVector};
pub use error::{Error, Result};
pub use exec::Execution;
pub use pointset::{Family, GaussianParams, PointSet, PointSetSpec};
pub use quantizer::{aggregate, dequantize, exact_second_moment, quantize, QuantizedGradient};
pub use rng::RngState;

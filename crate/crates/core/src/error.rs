use thiserror::Error;

/// Errors raised across the quantizer, privacy, geometry and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {d}: {reason}")]
    InvalidDimension { d: usize, reason: &'static str },

    #[error("dimension {d} violates the {family} constraint ({requirement}); pad the input first")]
    DimensionConstraint {
        d: usize,
        family: &'static str,
        requirement: &'static str,
    },

    #[error("dimension {d} is unsupported for {family}")]
    UnsupportedDimension { d: usize, family: &'static str },

    #[error("point set cardinality {requested} exceeds the cap {cap}")]
    CardinalityOverflow { requested: f64, cap: usize },

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("index {index} out of range for a point set of {m} points")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("input norm {norm} exceeds the unit ball")]
    BallViolation { norm: f64 },

    #[error("iterative decomposition stalled at residual {residual:e} after {iters} iterations")]
    NoConvergence { residual: f64, iters: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("gradient contains non-finite entries")]
    InvalidGradient,

    #[error("message mismatch: {0}")]
    Mismatch(String),

    #[error("coefficient {index} is {value:e}, below the roundoff floor")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("wire format error: {0}")]
    Wire(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("optimization diverged at iteration {iteration}")]
    Diverged { iteration: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid degree law: {0}")]
    InvalidSpec(String),

    #[error("degree sequence has no edges")]
    NoEdges,

    #[error("invalid degree sequence: {0}")]
    InvalidDegrees(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("fixed point did not converge after {iterations} iterations (best residual {residual:e}) at z = {z}")]
    NoConvergence {
        z: num_complex::Complex64,
        iterations: usize,
        residual: f64,
    },

    #[error("negative density {value:e} at x = {x} (solver left the analytic branch)")]
    NegativeDensity { x: f64, value: f64 },

    #[error("{v} is a pole of xi")]
    Pole { v: f64 },

    #[error("root isolation failed on ({lo}, {hi}): {reason}")]
    RootIsolation { lo: f64, hi: f64, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

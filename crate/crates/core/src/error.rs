use thiserror::Error;

/// Failures raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("pole of {function} at {re}{im:+}i")]
    Pole {
        function: &'static str,
        re: f64,
        im: f64,
    },
    #[error("{function} requires {requirement}, got {value}")]
    Domain {
        function: &'static str,
        requirement: &'static str,
        value: String,
    },
    #[error("invalid interval [{c}, {d})")]
    InvalidInterval { c: f64, d: f64 },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite sample at t = {at}")]
    NonFinite { at: f64 },
    #[error("quadrature did not converge (estimated error {estimate:e})")]
    NoConvergence { estimate: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("grid does not contain the {0} endpoint")]
    MissingEndpoint(&'static str),
    #[error("generic position certificate failed at x = {x}, k = {k}: {reason}")]
    Certification { x: f64, k: usize, reason: String },
    #[error("states are not separable within {max_len} letters (best gap {best_gap:e})")]
    NotSeparable { max_len: usize, best_gap: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

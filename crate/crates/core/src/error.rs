use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("invalid p-value {value} at index {index}: must lie in [0, 1]")]
    InvalidPValue { index: usize, value: f64 },

    #[error("empty p-value vector")]
    Empty,

    /// A combiner cannot evaluate a boundary value (for instance 0 under the harmonic mean).
    #[error("{method}: p-value {value} at index {index} is outside the combiner's domain")]
    CombineDomain {
        method: String,
        index: usize,
        value: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{kind} threshold not implemented for {method}; supported: {supported}")]
    Unsupported {
        method: String,
        kind: &'static str,
        supported: &'static str,
    },

    #[error("no closed form for {method} with kind {kind}; choose an asymptotic or MonteCarlo mode")]
    NoClosedForm { method: String, kind: &'static str },

    #[error("mode {mode} is not available for {method} ({kind})")]
    ModeUnavailable {
        method: String,
        kind: &'static str,
        mode: String,
    },

    #[error("epsilon = {epsilon} exceeds the closed-form bound {bound} (Gamma(1+1/r)^K / Gamma(1+K/r))")]
    BoundViolation { epsilon: f64, bound: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("{what} failed to converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("{path}:{line}: {detail}")]
    Parse {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("io error on {path}: {detail}")]
    Io { path: PathBuf, detail: String },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}

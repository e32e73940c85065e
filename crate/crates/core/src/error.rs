use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The point sits on (or a stencil straddles) the pole at x = 0.
    #[error("x = {x} is at the pole of 1/(e^x - 1); precondition x != 0 violated")]
    Pole { x: f64 },

    #[error("order n = {n} is outside the supported range {min}..={max}")]
    UnsupportedOrder { n: u32, min: u32, max: u32 },

    #[error("order n = {n} exceeds the Stirling table order {max}")]
    OrderOutOfRange { n: u32, max: u32 },

    #[error("series sum_k k^n e^(-kx) diverges for x = {x}; precondition x > 0 violated")]
    DivergentSeries { x: f64 },

    #[error("series did not reach its tolerance within {max_terms} terms")]
    NonConvergence { max_terms: u64 },

    #[error("argument {value} violates the precondition {requirement}")]
    Domain { value: f64, requirement: &'static str },

    #[error("mu = -1 makes 1/(mu e^(lambda t) + 1) singular at t = 0")]
    SingularParameter,

    #[error("|x| = {x} is outside the Bernoulli series radius; precondition |x| < 2*pi violated")]
    OutOfRadius { x: f64 },

    #[error(
        "quadrature missed tolerance after {panels} panels (best estimate {best}, error estimate {err_estimate})"
    )]
    ConvergenceFailure {
        best: f64,
        err_estimate: f64,
        panels: usize,
    },

    #[error("zeta integral diverges for s = {s}; precondition s > 1 violated")]
    DivergentZeta { s: f64 },

    #[error("limit extrapolation is unstable: {0}")]
    UnstableLimit(String),

    #[error("result overflowed binary64 at n = {n}")]
    Overflow { n: u32 },

    #[error("invalid policy: {0}")]
    InvalidPolicy(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

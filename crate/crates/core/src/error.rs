use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dyadic block {n} exceeds grid radius {radius}")]
    BlockOutOfRange { n: u32, radius: usize },
    #[error("{0} is not a dyadic integer")]
    NotDyadic(u32),
    #[error("time grid too coarse: nyquist {nyquist:.3} below required {required:.3}")]
    Resolution { nyquist: f64, required: f64 },
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("grid radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),
    #[error("all weights are zero")]
    AllZeroWeights,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("step rejected at t = {t}: energy drift rate {rate:e} exceeds tolerance {tolerance:e}")]
    StepRejected { t: f64, rate: f64, tolerance: f64 },
    #[error("enumeration cap {cap} exceeded (N_max = {n_max})")]
    CapExceeded { n_max: u32, cap: u32 },
    #[error("power iteration did not converge after {iterations} iterations; last estimate {estimate}")]
    NonConvergence { iterations: usize, estimate: f64 },
    #[error("axis mismatch: {0}")]
    AxisMismatch(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("invalid argument `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

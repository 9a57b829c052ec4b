use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truth table has {got} entries, expected 2^{n} = {expected}")]
    LengthMismatch { n: usize, expected: usize, got: usize },
    #[error("value at index {index} is not finite")]
    NonFinite { index: usize },
    #[error("n = {0} is outside the supported range 1..=24")]
    TooLarge(usize),
    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("exponent p = {0} must be >= 1")]
    BadExponent(f64),
    #[error("symmetrization size m = {m} must satisfy n = {n} <= m <= 1000000")]
    BadM { m: usize, n: usize },
    #[error("polynomial degree {degree} exceeds n = {n}")]
    DegreeTooHigh { degree: usize, n: usize },
    #[error("level profile is not a polynomial of the mean within tolerance (residual {residual:e})")]
    InconsistentProfile { residual: f64 },
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("unknown example name `{0}`")]
    UnknownName(String),
    #[error("size error: {0}")]
    SizeError(String),
    #[error("function is not bounded by one (sup norm {0})")]
    NotBounded(f64),
    #[error("norm lemma needs n > d^2 (n = {n}, d = {d})")]
    Regime { n: usize, d: usize },
    #[error("construction expects odd degree, got {0}")]
    BadDegree(usize),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("certification failed: continuous constraint violated by {violation:e}")]
    CertificationFailed { violation: f64 },
    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    Pole(Complex64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("critical damping: gamma/2 = {half_gamma} is within 1e-9 of w0 = {w0}")]
    CriticalDamping { half_gamma: f64, w0: f64 },

    #[error("Omega coincides with a damped root; residue coefficients are singular")]
    DegenerateRoots,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("uncertainty product v = {0} is below 1/2")]
    UncertaintyViolation(f64),

    #[error("pure state (v = 1/2): entropy derivative diverges logarithmically")]
    PureState,

    #[error("{what} did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Convergence {
        what: &'static str,
        estimate: f64,
        tolerance: f64,
    },

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("quadratic form is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("matrix element ({n},{m}) is not representable; keep n_cut <= {advisory}")]
    Overflow { n: usize, m: usize, advisory: usize },

    #[error("consistency check failed for {moment}: {detail}")]
    Consistency { moment: &'static str, detail: String },

    #[error("integration path hits critical damping at gamma = {0}")]
    PathCrossing(f64),

    #[error("invalid figure id {0} (expected 1..=7)")]
    InvalidFigure(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

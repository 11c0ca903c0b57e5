use thiserror::Error;

/// Errors raised by the library. The CLI maps [`Error::NonConvergence`] to a
/// distinct exit code; everything else is a validation failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("identity has no primitivity status")]
    IdentityPrimitivity,

    #[error("enumeration budget exceeded: {budget} > cap {cap}")]
    BudgetExceeded { budget: f64, cap: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ambient mismatch: {0} vs {1}")]
    AmbientMismatch(String, String),

    #[error("degenerate triple: {0}")]
    DegenerateTriple(String),

    #[error("tracking condition violated at sample {index}: {detail}")]
    Tracking { index: usize, detail: String },

    #[error("projection not generic after {attempts} attempts")]
    NonGeneric { attempts: usize },

    #[error("puncture clearance violated at sample {index}: distance {distance:e}")]
    Clearance { index: usize, distance: f64 },

    #[error("pole proximity: distance {distance:e} to pole at {pole_re}{pole_im:+}i")]
    PoleProximity { distance: f64, pole_re: f64, pole_im: f64 },

    #[error("analyticity check failed: Cauchy-Riemann residual {0:e}")]
    NotAnalytic(f64),

    #[error("unresolved singularity: {0}")]
    Unresolved(String),

    #[error("epsilon too large: sup|f| = {sup_f:e} >= clearance {clearance:e}")]
    EpsilonTooLarge { sup_f: f64, clearance: f64 },

    #[error("no convergence after {iterations} iterations, relative residual {residual:e}")]
    NonConvergence { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

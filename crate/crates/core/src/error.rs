use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("steepest-descent path tracing did not converge after {steps} steps (t = {t}, residual = {residual:e})")]
    PathTracing { steps: usize, t: f64, residual: f64 },

    #[error("Padé approximant has a pole on the positive integration axis at {location}")]
    PadePole { location: f64 },

    #[error("series too short for resummation: need at least {needed} coefficients, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("truncation overflow: requested order {requested} exceeds stored degree {stored}")]
    TruncationOverflow { requested: usize, stored: usize },

    #[error("level {level} leaks through the box wall: |psi| = {value:e} at the boundary")]
    BoundaryLeakage { level: usize, value: f64 },

    #[error("point {x} lies outside the grid box [{lo}, {hi}]")]
    OutsideBox { x: f64, lo: f64, hi: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e}: achieved residual {residual:e}")]
    QuadratureBudget { tolerance: f64, residual: f64 },

    #[error("trajectory escaped the potential box at t = {time}")]
    Escaped { time: f64 },

    #[error("trajectory is off-shell: equation-of-motion residual {residual:e} exceeds {tolerance:e}")]
    OffShell { residual: f64, tolerance: f64 },

    #[error("fluctuation operator is singular (conjugate point): smallest eigenvalue {eigenvalue:e}")]
    SingularOperator { eigenvalue: f64 },

    #[error("energy {h} lies below the potential minimum {minimum}")]
    BelowMinimum { h: f64, minimum: f64 },

    #[error("x = {x} is outside the classically allowed region [{lo}, {hi}] at energy {h}")]
    Forbidden { x: f64, h: f64, lo: f64, hi: f64 },

    #[error("root finding failed on bracket [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("radius fell below the guard r_min = {r_min} at t = {time}")]
    RadiusGuard { time: f64, r_min: f64 },

    #[error("grid mismatch: expected {expected} samples, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("linear system is singular")]
    Singular,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

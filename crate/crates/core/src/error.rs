use crate::C64;
use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("spectral parameter {k} is outside the domain: {reason}")]
    Domain { k: C64, reason: &'static str },

    #[error("entry ({i},{j}) has an unbounded exponential factor at k = {k}")]
    UnboundedExponential { i: usize, j: usize, k: C64 },

    #[error("entry ({i},{j}) is undefined at k = {k}")]
    Undefined { i: usize, j: usize, k: C64 },

    #[error("s11 vanishes on the contour at k = {k}")]
    ZeroOnContour { k: C64 },

    #[error("winding number {value} is not close to an integer; refine the quadrature")]
    InsufficientQuadrature { value: f64 },

    #[error("{count} zeros found, more than the allowed {max}")]
    TooManyPoles { count: usize, max: usize },

    #[error("Newton refinement did not converge near {k}")]
    NewtonFailed { k: C64 },

    #[error("fit residual {residual:e} exceeds {tol:e}: linear dependence violated at k0 = {k0}")]
    LinearDependence { k0: C64, residual: f64, tol: f64 },

    #[error("s22^A(k0) = {value} is too small at k0 = {k0}")]
    DegenerateAdjoint { k0: C64, value: C64 },

    #[error("singular one-soliton: i(w^2 k0^2 - w) c = {value} is negative")]
    SingularSoliton { value: f64 },

    #[error("positivity combination i(w^2 k0^2 - w) c = {value} is not real")]
    NonReal { value: C64 },

    #[error("singular breather: det(I - B) = {det:e} at x = {x}, t = {t}")]
    SingularBreather { x: f64, t: f64, det: f64 },

    #[error("near-singular pole configuration (condition number {cond:e})")]
    NearSingular { cond: f64 },

    #[error("k = {k} is within the exclusion radius of a pole of r2")]
    NearR2Pole { k: C64 },

    #[error("inequality violated at k = {k}: {what}")]
    InequalityViolated { k: C64, what: String },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(k: C64, reason: &'static str) -> Self {
        Error::Domain { k, reason }
    }

    /// Coarse classification used by front ends to choose exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidInput(_) | Error::GridTooCoarse(_) | Error::Io { .. } => {
                ErrorKind::Config
            }
            Error::SingularSoliton { .. }
            | Error::NonReal { .. }
            | Error::SingularBreather { .. }
            | Error::InequalityViolated { .. }
            | Error::LinearDependence { .. } => ErrorKind::Validation,
            _ => ErrorKind::Numeric,
        }
    }
}

/// Error categories exposed to the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numeric,
    Validation,
}

pub type Result<T> = std::result::Result<T, Error>;

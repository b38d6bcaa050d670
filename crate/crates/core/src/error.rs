use thiserror::Error;

/// Errors raised by the toolkit. Each variant maps to a distinct failure mode
/// of one of the numerical stages; the CLI turns them into exit code 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 5 (got n = {n})")]
    DimensionTooSmall { n: u32 },

    #[error("lambda = {lambda} must be strictly below Lambda = n^2/4 = {lambda_max}")]
    LambdaOutOfRange { lambda: f64, lambda_max: f64 },

    #[error("exponent q = {q} is out of range: {reason}")]
    ExponentOutOfRange { q: f64, reason: &'static str },

    #[error("grid with {points} points is too coarse (need at least {required})")]
    GridTooCoarse { points: usize, required: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample at t = {t}")]
    NonFiniteSample { t: f64 },

    #[error("denominator vanishes: the profile is identically zero")]
    ZeroDenominator,

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("boundary leak {leak:.3e} exceeds {limit:.1e}; enlarge the half-width T")]
    BoundaryLeak { leak: f64, limit: f64 },

    #[error("shift log(rho) = {shift} is outside the admissible range |log rho| <= {limit}")]
    ShiftOutOfRange { shift: f64, limit: f64 },

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error(
        "singular configuration r = {r}, s = {s}, n = {n}: the spherical mean does not converge"
    )]
    SingularConfiguration { r: f64, s: f64, n: u32 },

    #[error("ground state is not converged (residual {residual:.3e} > tolerance {tol:.1e})")]
    NotConverged { residual: f64, tol: f64 },

    #[error("no sign change of the second-variation gap in the scanned range")]
    NoSignChange,

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("alpha unreachable: {alpha} is outside (0, {max}]")]
    AlphaUnreachable { alpha: f64, max: f64 },

    #[error("disk of radius {radius} centered at ({cx}, {cy}) is not contained in the box")]
    DiskNotContained { radius: f64, cx: f64, cy: f64 },

    #[error("level set region is empty")]
    EmptyRegion,

    #[error("level set region is degenerate: {interior_nodes} interior nodes (need at least 4)")]
    DegenerateRegion { interior_nodes: usize },

    #[error("point ({0}, {1}) is not inside the domain")]
    CenterOutside(f64, f64),

    #[error("conjugate gradients did not converge: relative residual {residual:e} after {iterations} iterations")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("CFL violation: max |v| * step = {travel:e} exceeds {limit:e}")]
    CflViolation { travel: f64, limit: f64 },

    #[error("radius {0} is outside the profile domain")]
    OutsideDomain(f64),

    #[error("radius {r} is within {tol:e} of breakpoint {breakpoint}")]
    NearBreakpoint { r: f64, breakpoint: f64, tol: f64 },

    #[error("source argument {0} is outside the domain of f")]
    SourceDomain(f64),

    #[error("not an exterior profile")]
    NotExterior,

    #[error("iteration {iter}: {source}")]
    Iteration {
        iter: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

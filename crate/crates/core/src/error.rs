use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not uniformly elliptic with unit determinant: {0}")]
    NonElliptic(String),

    #[error("dilatation magnitude {0} is too close to 1")]
    DegenerateDilatation(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("point {0} lies outside the open unit disc")]
    OutsideDisc(String),

    #[error("map `{0}` does not preserve area (J is not identically 1)")]
    NotMeasurePreserving(String),

    #[error("quadrature diverges under refinement: {coarse} -> {fine}")]
    QuadratureDivergence { coarse: f64, fine: f64 },

    #[error("inverse Jacobian is unbounded on the disc for map `{0}`")]
    NotInfRegular(String),

    #[error("nu({kappa}) = {nu} is not below 1")]
    NuExceedsOne { kappa: f64, nu: f64 },

    #[error("exponent {kappa} outside (1, {limit})")]
    KappaOutOfRange { kappa: f64, limit: f64 },

    #[error("no feasible exponent in (1, beta*) for K = {0}")]
    NoFeasibleBeta(f64),

    #[error("degenerate boundary: {0}")]
    DegenerateBoundary(String),

    #[error("invalid mesh resolution: {0}")]
    InvalidResolution(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverNoConvergence { iterations: usize, residual: f64 },

    #[error("mass matrix is not positive definite (pivot {0} failed)")]
    IndefiniteMass(usize),

    #[error("unknown map id `{0}`")]
    UnknownMap(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
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

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric (asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
    #[error(
        "root isolation found {found} real roots, expected {expected} (input is not real-rooted)"
    )]
    RootCountMismatch { found: usize, expected: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("system `{0}` exposes neither an orbit enumerator nor an orbit maximizer")]
    OrbitUnavailable(String),
    #[error("subspace basis is linearly dependent")]
    DegenerateBasis,
    #[error("{0} is not positive definite")]
    NotPositiveDefinite(&'static str),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("unknown generator set `{0}`")]
    UnknownGenerators(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("starting point is not in the feasible set (distance {distance:.3e})")]
    InfeasibleStart { distance: f64 },
    #[error("direction is not in the normal cone (violation {violation:.3e})")]
    NotNormal { violation: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

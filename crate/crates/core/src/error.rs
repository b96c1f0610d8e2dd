use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma family at x = {x}")]
    Pole { x: f64 },

    #[error("invalid dimensions m = {m}, n = {n} (need 1 <= m <= n)")]
    Dimension { m: usize, n: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} requires n > m, got m = n = {n}")]
    NeedsStrictDims { what: &'static str, n: usize },

    #[error("dims ({m}, {n}) exceed the numeric-derivative budget mn <= {limit}")]
    Budget { m: usize, n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("extrapolation did not converge: estimate {estimate}, last change {change} > {tolerance}")]
    NonConvergence {
        estimate: f64,
        change: f64,
        tolerance: f64,
    },

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("eigensolver: {0}")]
    Eigen(String),
}

impl Error {
    /// True for failures of an iterative numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Quadrature { .. } | Error::Eigen(_)
        )
    }
}

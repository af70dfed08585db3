use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("edge density {gamma} is within tolerance of the breakpoint {breakpoint}; the bound is not differentiable there")]
    Breakpoint { gamma: f64, breakpoint: f64 },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("vertex {vertex} has zero rooted degree; its link graph is undefined")]
    DegenerateLink { vertex: usize },

    #[error("edge density {0} is outside [0, 1/2)")]
    OutOfTheoremDomain(f64),

    #[error("edge weight {weight} on pair ({i}, {j}) is not 0 or 1")]
    UnsupportedWeights { i: usize, j: usize, weight: f64 },

    #[error("resource limit: {0}")]
    Limit(String),

    #[error("descent diverged: {0}")]
    Divergence(String),

    #[error("graph is not stationary: {0}")]
    NotStationary(String),

    #[error("irrational value in exact mode: {0}")]
    Inexact(String),
}

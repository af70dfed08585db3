//! Clique densities of weighted graphs.
//!
//! The crate evaluates the lower bound `F_r(γ)` on the `K_r`-density of a
//! graph with edge density `γ`, builds the weighted graphs that meet it,
//! checks the identities and local inequalities behind it, computes exact
//! minima for small simple graphs, and searches numerically for weighted
//! graphs with small deficit `G(K_r) − F_r(G(K_2))`.
//!
//! Everything that only needs field arithmetic is generic over [`Scalar`],
//! so it runs in `f64` or in exact rationals ([`Rational`]).

pub mod analytic;
pub mod bounds;
pub mod error;
pub mod extremal;
pub mod format;
pub mod graph;
pub mod optimize;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod simple;
pub mod subsets;

pub use error::{Error, Result};
pub use graph::{SymmetricWeights, WeightedGraph};
pub use report::{CheckOutcome, VerificationReport};
pub use scalar::{Real, Scalar};
pub use simple::SimpleGraph;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Weighted graph in double precision.
pub type Graph = WeightedGraph<f64>;
/// Weighted graph with exact rational weights.
pub type ExactGraph = WeightedGraph<Rational>;

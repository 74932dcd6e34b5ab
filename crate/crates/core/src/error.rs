use thiserror::Error;

/// Errors raised by the numerical library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A request exceeds a configured capability (degree cap, order cap, grid size).
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// Inputs violate a precondition (dimension mismatch, non-positive time, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// An integrand produced a non-finite value at a quadrature node.
    #[error("non-finite value {value} at node {node:?}")]
    Evaluation { node: Vec<f64>, value: f64 },

    /// An integrand fails the tail-decay check of the quadrature grid.
    #[error("integrand not integrable on this grid: {0}")]
    Integrability(String),

    /// A sampling harness received an empty or degenerate sample set.
    #[error("degenerate sampling: {0}")]
    Sampling(String),
}

pub type Result<T> = std::result::Result<T, Error>;

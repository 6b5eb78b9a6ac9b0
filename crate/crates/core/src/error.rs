use thiserror::Error;

/// Errors produced by the evaluation and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeds a configured resource budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Two values computed under different precision contexts were combined.
    #[error("precision context mismatch: {left} bits vs {right} bits")]
    ContextMismatch { left: u32, right: u32 },

    /// The integrand produced NaN or an infinity at a quadrature node.
    #[error("integrand evaluation failed at x = {node}: {reason}")]
    Evaluation { node: String, reason: String },

    /// A q-series was asked to converge in a regime where direct summation is refused.
    #[error("slow convergence: {0}")]
    SlowConvergence(String),

    /// Polynomial discovery could not produce a verified relation.
    #[error("relation discovery failed: {0}")]
    Discovery(String),

    /// Quadrature or series did not reach the requested accuracy.
    #[error("not converged: {0}")]
    Unconverged(String),

    /// Malformed request (unknown identity, inapplicable method).
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

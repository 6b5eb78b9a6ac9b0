//! Arbitrary-precision numerical integration.
//!
//! Integrands receive a [`Node`] carrying the abscissa together with its exact
//! distances to both interval ends. Tanh-sinh nodes crowd the endpoints far
//! beyond what `x` itself can resolve, so integrands with endpoint
//! singularities should read `from_a`/`to_b` instead of forming `x - a` or
//! `b - x`.

mod domains;
mod gauss;
mod tanh_sinh;

pub use domains::{integrate_0_inf, integrate_1_inf, integrate_triangle, integrate_triangle_prepared};
pub use gauss::{gauss_legendre, legendre_nodes};
pub use tanh_sinh::{level_estimates, tanh_sinh, tanh_sinh_with, QuadConfig};

use rug::Float;

use crate::precision::{BigReal, PrecCtx};

/// Default refinement depth for one-dimensional rules.
pub const DEFAULT_MAX_LEVEL: u32 = 12;

#[derive(Debug, Clone)]
pub struct Node {
    pub x: Float,
    pub from_a: Float,
    pub to_b: Float,
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: BigReal,
    /// Estimated absolute error, never negative.
    pub err_est: BigReal,
    /// Integrand evaluations (including those of nested rules).
    pub nodes: u64,
    /// Refinement level reached.
    pub level: u32,
    pub converged: bool,
    /// Where and why convergence failed, if it did.
    pub detail: Option<String>,
}

impl QuadResult {
    pub fn value(&self) -> &Float {
        self.value.as_float()
    }

    pub fn err(&self) -> &Float {
        self.err_est.as_float()
    }

    pub(crate) fn new(ctx: &PrecCtx, value: Float, err: Float, nodes: u64, level: u32) -> Self {
        QuadResult {
            value: BigReal::from_float(ctx, value),
            err_est: BigReal::from_float(ctx, err.abs()),
            nodes,
            level,
            converged: true,
            detail: None,
        }
    }

    /// Sum of two partial integrals.
    pub(crate) fn plus(self, other: QuadResult, ctx: &PrecCtx) -> QuadResult {
        let value = ctx.float(self.value() + other.value());
        let err = ctx.float(self.err() + other.err());
        QuadResult {
            value: BigReal::from_float(ctx, value),
            err_est: BigReal::from_float(ctx, err),
            nodes: self.nodes + other.nodes,
            level: self.level.max(other.level),
            converged: self.converged && other.converged,
            detail: self.detail.or(other.detail),
        }
    }
}

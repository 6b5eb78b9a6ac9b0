//! Semi-infinite and triangular domains built on the tanh-sinh rule.

use rug::Float;

use super::tanh_sinh::{tanh_sinh_core, QuadConfig, Sample};
use super::{Node, QuadResult};
use crate::error::Result;
use crate::precision::{decimal_string, PrecCtx};

fn infinite_node(u: Float) -> Node {
    let bits = u.prec();
    Node {
        from_a: u.clone(),
        to_b: Float::with_val(bits, rug::float::Special::Infinity),
        x: u,
    }
}

/// `∫_1^∞ f(u) du` through `u = 1/(1 - s)`, `du = u^2 ds`, `s ∈ (0, 1)`.
/// The integrand sees nodes with `x = from_a = u` and `to_b = ∞`.
pub fn integrate_1_inf<F>(f: F, ctx: &PrecCtx, max_level: u32) -> Result<QuadResult>
where
    F: Fn(&Node) -> Result<Float> + Sync,
{
    let bits = ctx.working_bits();
    let zero = ctx.zero();
    tanh_sinh_core(
        |node| {
            let u = Float::with_val(bits, node.to_b.recip_ref());
            let jac = Float::with_val(bits, &u * &u);
            let v = f(&infinite_node(u))?;
            Ok(Sample {
                value: v * jac,
                err: zero.clone(),
                nodes: 1,
                failure: None,
            })
        },
        &ctx.zero(),
        &ctx.one(),
        ctx,
        &QuadConfig::new(max_level),
    )
}

/// `∫_0^∞ f(u) du` for `f` integrable at 0 and decaying at least
/// exponentially: split at 1, tanh-sinh on `(0, 1)`, and the `1/(1 - s)` map on `[1, ∞)`.
pub fn integrate_0_inf<F>(f: F, ctx: &PrecCtx, max_level: u32) -> Result<QuadResult>
where
    F: Fn(&Node) -> Result<Float> + Sync,
{
    let bits = ctx.working_bits();
    let zero = ctx.zero();
    let head = tanh_sinh_core(
        |node| {
            let u = Float::with_val(bits, &node.from_a);
            Ok(Sample {
                value: f(&infinite_node(u))?,
                err: zero.clone(),
                nodes: 1,
                failure: None,
            })
        },
        &ctx.zero(),
        &ctx.one(),
        ctx,
        &QuadConfig::new(max_level),
    )?;
    let tail = integrate_1_inf(&f, ctx, max_level)?;
    Ok(head.plus(tail, ctx))
}

/// `∫_0^1 ∫_0^α f(α, β) dβ dα` by nested tanh-sinh.
///
/// The outer node carries `(α, from_a = α, to_b = 1 - α)`; the inner node
/// carries `(β, from_a = β, to_b = α - β)`, so `1 - β` is available without
/// cancellation as `outer.to_b + inner.to_b`. Inner error estimates are
/// propagated through the outer weights. The result is unconverged when the
/// weighted error of non-converged inner integrals is above the outer
/// threshold; the detail then names the worst α.
pub fn integrate_triangle<F>(f: F, ctx: &PrecCtx, max_level: u32) -> Result<QuadResult>
where
    F: Fn(&Node, &Node) -> Result<Float> + Sync,
{
    integrate_triangle_prepared(|_| Ok(()), |_, outer, inner| f(outer, inner), ctx, max_level)
}

/// As [`integrate_triangle`], with `prep` evaluated once per outer node and
/// its result handed to every inner evaluation.
pub fn integrate_triangle_prepared<P, T, F>(prep: P, f: F, ctx: &PrecCtx, max_level: u32) -> Result<QuadResult>
where
    P: Fn(&Node) -> Result<T> + Sync,
    T: Sync,
    F: Fn(&T, &Node, &Node) -> Result<Float> + Sync,
{
    let cfg = QuadConfig::new(max_level);
    let zero = ctx.zero();
    tanh_sinh_core(
        |outer| {
            let state = prep(outer)?;
            let inner = tanh_sinh_core(
                |node| {
                    Ok(Sample {
                        value: f(&state, outer, node)?,
                        err: zero.clone(),
                        nodes: 1,
                        failure: None,
                    })
                },
                &zero,
                &outer.x,
                ctx,
                &cfg,
            )?;
            let failure = (!inner.converged).then(|| {
                format!(
                    "inner integral unconverged at α = {}",
                    decimal_string(&outer.x)
                )
            });
            Ok(Sample {
                value: inner.value().clone(),
                err: inner.err().clone(),
                nodes: inner.nodes,
                failure,
            })
        },
        &ctx.zero(),
        &ctx.one(),
        ctx,
        &cfg,
    )
}

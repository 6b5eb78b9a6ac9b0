//! The hypergeometric function `F(α) = Σ C(2n,n)^2 (α/16)^n` and the
//! α ↔ u change of variables `u = F(1-α) / (2 F(α))`.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{decimal_string, BigReal, PrecCtx, UnitPoint};
use crate::quadrature::{tanh_sinh, DEFAULT_MAX_LEVEL};

/// Power series, used for `α <= 1/2`. Consecutive terms have ratio
/// `(2n+1)^2 α / (4 (n+1)^2) < α`, so the tail after a term `t` is below `t α / (1 - α)`.
fn f_series(alpha: &Float, ctx: &PrecCtx) -> Float {
    let bits = ctx.working_bits();
    let eps = ctx.series_tail_eps();
    let tail_factor = Float::with_val(bits, alpha / Float::with_val(bits, 1u32 - alpha));
    let mut sum = ctx.one();
    let mut term = ctx.one();
    let mut n: u32 = 0;
    loop {
        let num = (2 * n + 1) * (2 * n + 1);
        let den = 4 * (n + 1) * (n + 1);
        term *= alpha;
        term *= num;
        term /= den;
        sum += &term;
        n += 1;
        let tail = Float::with_val(bits, &term * &tail_factor);
        if tail < Float::with_val(bits, &eps * &sum) {
            return sum;
        }
    }
}

/// Arithmetic–geometric mean of `a` and `b`, iterated to full working precision.
pub(crate) fn agm(a: &Float, b: &Float, ctx: &PrecCtx) -> Float {
    let bits = ctx.working_bits();
    let mut a = Float::with_val(bits, a);
    let mut b = Float::with_val(bits, b);
    let mut tol = ctx.one();
    tol >>= bits - 2;
    for _ in 0..(4 * bits) {
        let gap = Float::with_val(bits, &a - &b).abs();
        if gap <= Float::with_val(bits, &a * &tol) {
            break;
        }
        let next_a = Float::with_val(bits, &a + &b) / 2u32;
        b = Float::with_val(bits, &a * &b).sqrt();
        a = next_a;
    }
    a
}

/// `F(α)` from a point that carries `1 - α` exactly: the series below 1/2,
/// `1 / AGM(1, sqrt(1 - α))` above.
pub(crate) fn f_unit(p: &UnitPoint, ctx: &PrecCtx) -> Float {
    if p.x <= 0.5 {
        f_series(&p.x, ctx)
    } else {
        let root = Float::with_val(ctx.working_bits(), p.comp.sqrt_ref());
        agm(&ctx.one(), &root, ctx).recip()
    }
}

fn unit_point(alpha: &BigReal, ctx: &PrecCtx) -> Result<UnitPoint> {
    alpha.check(ctx)?;
    UnitPoint::new(alpha.as_float().clone()).map_err(|_| {
        Error::Domain(format!(
            "F(α) requires 0 < α < 1, got {}",
            alpha.to_decimal_string()
        ))
    })
}

pub fn f_hyper(alpha: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    let p = unit_point(alpha, ctx)?;
    Ok(BigReal::from_float(ctx, f_unit(&p, ctx)))
}

/// `(2/π) ∫_0^1 dt / sqrt((1 - t^2)(1 - α t^2))` by tanh-sinh quadrature, an
/// independent route to `F(α)`.
pub fn f_elliptic_quad(alpha: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    let p = unit_point(alpha, ctx)?;
    let bits = ctx.working_bits();
    let a = &p.x;
    let r = tanh_sinh(
        |node| {
            let t = &node.x;
            let one_plus = Float::with_val(bits, 1u32 + t);
            let one_minus_t2 = one_plus * &node.to_b;
            let t2 = Float::with_val(bits, t * t);
            let second = Float::with_val(bits, 1u32 - Float::with_val(bits, a * t2));
            Ok(Float::with_val(bits, one_minus_t2 * second).sqrt().recip())
        },
        &ctx.zero(),
        &ctx.one(),
        ctx,
        DEFAULT_MAX_LEVEL,
    )?;
    if !r.converged {
        return Err(Error::Unconverged(format!(
            "elliptic integral at α = {}: {}",
            decimal_string(a),
            r.detail.unwrap_or_default()
        )));
    }
    let value = Float::with_val(bits, r.value() * 2u32) / ctx.pi();
    Ok(BigReal::from_float(ctx, value))
}

/// α together with the quantities the change of variables needs.
#[derive(Debug, Clone)]
pub struct AlphaPoint {
    pub alpha: BigReal,
    /// `1 - α`, kept separately so it stays accurate as α → 1.
    pub alpha_comp: BigReal,
    pub f_alpha: BigReal,
    pub f_comp: BigReal,
    pub u: BigReal,
    /// `du/dα = -1 / (2π α (1-α) F(α)^2)`.
    pub du_dalpha: BigReal,
}

pub(crate) fn alpha_point_unit(p: &UnitPoint, ctx: &PrecCtx) -> AlphaPoint {
    let bits = ctx.working_bits();
    let fa = f_unit(p, ctx);
    let fc = f_unit(&p.flipped(), ctx);
    let u = Float::with_val(bits, &fc / &fa) / 2u32;
    let denom = Float::with_val(bits, &p.x * &p.comp) * ctx.pi() * 2u32 * Float::with_val(bits, fa.square_ref());
    let du = -denom.recip();
    AlphaPoint {
        alpha: BigReal::from_float(ctx, p.x.clone()),
        alpha_comp: BigReal::from_float(ctx, p.comp.clone()),
        f_alpha: BigReal::from_float(ctx, fa),
        f_comp: BigReal::from_float(ctx, fc),
        u: BigReal::from_float(ctx, u),
        du_dalpha: BigReal::from_float(ctx, du),
    }
}

pub fn alpha_point(alpha: &BigReal, ctx: &PrecCtx) -> Result<AlphaPoint> {
    let p = unit_point(alpha, ctx)?;
    Ok(alpha_point_unit(&p, ctx))
}

pub fn u_from_alpha(alpha: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    Ok(alpha_point(alpha, ctx)?.u)
}

pub(crate) fn u_from_unit(p: &UnitPoint, ctx: &PrecCtx) -> Float {
    let fa = f_unit(p, ctx);
    let fc = f_unit(&p.flipped(), ctx);
    Float::with_val(ctx.working_bits(), &fc / &fa) / 2u32
}

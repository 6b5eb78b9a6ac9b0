//! Jacobi theta constants at the nome `q = e^{-2πu}` and the inverse map u → α.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecCtx, UnitPoint};

#[derive(Debug, Clone)]
pub struct ThetaTriple {
    pub theta2: BigReal,
    pub theta3: BigReal,
    pub theta4: BigReal,
}

pub(crate) fn check_positive(u: &Float, what: &str) -> Result<()> {
    if !(u.is_finite() && *u > 0) {
        return Err(Error::Domain(format!("{what} requires u > 0, got {u}")));
    }
    Ok(())
}

/// Raw theta sums. Successive exponents grow by `2n + 1`, so once the ratio
/// `q^{2n+1}` is at most 1/2 the tail is below twice the next term.
pub(crate) fn theta_raw(u: &Float, ctx: &PrecCtx) -> (Float, Float, Float) {
    let bits = ctx.working_bits();
    let eps = ctx.series_tail_eps();
    let pi = ctx.pi();
    let q = Float::with_val(bits, -Float::with_val(bits, u * &pi) * 2u32).exp();

    // θ3 = 1 + 2 Σ q^{n^2}, θ4 = 1 + 2 Σ (-1)^n q^{n^2}
    let mut s3 = ctx.zero();
    let mut s4 = ctx.zero();
    // θ2 = 2 q^{1/4} Σ_{n>=0} q^{n(n+1)}
    let mut s2 = ctx.one();
    let mut n: u32 = 1;
    let mut qn2 = q.clone(); // q^{n^2}
    let mut step = Float::with_val(bits, &q * &q) * &q; // q^{2n+1}
    let mut qnn1 = Float::with_val(bits, &q * &q); // q^{n(n+1)}, n = 1
    loop {
        s3 += &qn2;
        if n % 2 == 0 {
            s4 += &qn2;
        } else {
            s4 -= &qn2;
        }
        s2 += &qnn1;
        // next: q^{(n+1)^2} = q^{n^2} q^{2n+1}, q^{(n+1)(n+2)} = q^{n(n+1)} q^{2n+2}
        qn2 *= &step;
        let step2 = Float::with_val(bits, &step * &q);
        qnn1 *= &step2;
        step = step2 * &q;
        n += 1;
        let small_ratio = step <= 0.5;
        let bound = Float::with_val(bits, &qn2 * 2u32).max(&Float::with_val(bits, &qnn1 * 2u32));
        if small_ratio && bound < eps {
            break;
        }
        if qn2.is_zero() {
            break;
        }
    }
    let theta3 = Float::with_val(bits, &s3 * 2u32) + 1u32;
    let theta4 = Float::with_val(bits, &s4 * 2u32) + 1u32;
    let quarter = Float::with_val(bits, -Float::with_val(bits, u * &pi) / 2u32).exp();
    let theta2 = s2 * quarter * 2u32;
    (theta2, theta3, theta4)
}

pub fn theta_triple(u: &BigReal, ctx: &PrecCtx) -> Result<ThetaTriple> {
    u.check(ctx)?;
    check_positive(u.as_float(), "theta_triple")?;
    let (t2, t3, t4) = theta_raw(u.as_float(), ctx);
    Ok(ThetaTriple {
        theta2: BigReal::from_float(ctx, t2),
        theta3: BigReal::from_float(ctx, t3),
        theta4: BigReal::from_float(ctx, t4),
    })
}

/// `(α, 1 - α)` with `α = θ2^4/θ3^4` and `1 - α = θ4^4/θ3^4`. For `u < 1/2`
/// the symmetry `α(u) = 1 - α(1/(4u))` keeps the nome below `e^{-π}`.
pub(crate) fn alpha_unit_from_u(u: &Float, ctx: &PrecCtx) -> Result<UnitPoint> {
    check_positive(u, "alpha_from_u")?;
    let bits = ctx.working_bits();
    let (swap, arg) = if *u >= 0.5 {
        (false, u.clone())
    } else {
        (true, Float::with_val(bits, Float::with_val(bits, u * 4u32).recip_ref()))
    };
    let (t2, t3, t4) = theta_raw(&arg, ctx);
    let t3_4 = t3.square().square();
    let a = t2.square().square() / &t3_4;
    let c = t4.square().square() / &t3_4;
    let (x, comp) = if swap { (c, a) } else { (a, c) };
    UnitPoint::from_pair(x, comp)
}

pub fn alpha_from_u(u: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    u.check(ctx)?;
    let p = alpha_unit_from_u(u.as_float(), ctx)?;
    Ok(BigReal::from_float(ctx, p.x))
}

/// `∏_{m odd} (1 + r^m)/(1 - r^m)` with `r = e^{-2π/(4u)}`; equals `α^{-1/8}`.
///
/// With `x = r^m`, `log((1+x)/(1-x)) <= 2x/(1-x)`, so the log of the omitted
/// factors past `m` is at most `2 r^{m+2} / ((1 - r)(1 - r^2))`.
pub fn theta_quotient_product(u: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    u.check(ctx)?;
    check_positive(u.as_float(), "theta_quotient_product")?;
    let bits = ctx.working_bits();
    let eps = ctx.series_tail_eps();
    let r = Float::with_val(bits, -ctx.pi() / Float::with_val(bits, u.as_float() * 2u32)).exp();
    let r2 = Float::with_val(bits, r.square_ref());
    let denom = Float::with_val(bits, 1u32 - &r) * Float::with_val(bits, 1u32 - &r2);
    let mut prod = ctx.one();
    let mut rm = r.clone();
    loop {
        let num = Float::with_val(bits, 1u32 + &rm);
        let den = Float::with_val(bits, 1u32 - &rm);
        prod *= num / den;
        rm *= &r2;
        let tail = Float::with_val(bits, &rm * 2u32) / &denom;
        if tail < eps || rm.is_zero() {
            break;
        }
    }
    Ok(BigReal::from_float(ctx, prod))
}

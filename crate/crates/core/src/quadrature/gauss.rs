//! Gauss–Legendre rules with nodes found by Newton iteration at working precision.

use rayon::prelude::*;
use rug::Float;

use super::{Node, QuadResult};
use crate::error::{Error, Result};
use crate::precision::{decimal_string, PrecCtx};

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        // k P_k = (2k-1) x P_{k-1} - (k-1) P_{k-2}
        let t = Float::with_val(bits, x * &p1) * (2 * k as u32 - 1);
        let p2 = (t - Float::with_val(bits, &p0 * (k as u32 - 1))) / k as u32;
        p0 = std::mem::replace(&mut p1, p2);
    }
    if n == 0 {
        return (Float::with_val(bits, 1), Float::with_val(bits, 0));
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = (Float::with_val(bits, x * &p1) - &p0) * n as u32;
    let den = Float::with_val(bits, x * x) - 1u32;
    (p1, num / den)
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, ascending.
pub fn legendre_nodes(n: usize, bits: u32) -> Result<Vec<(Float, Float)>> {
    if n == 0 {
        return Err(Error::Domain("Gauss–Legendre needs n >= 1".into()));
    }
    let mut tol = Float::with_val(bits, 1);
    tol >>= bits.saturating_sub(6);
    let half: Vec<(Float, Float)> = (0..n.div_ceil(2))
        .into_par_iter()
        .map(|i| {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(bits, guess);
            for _ in 0..200 {
                let (p, dp) = legendre(n, &x);
                let dx = p / dp;
                x -= &dx;
                if dx.abs() < tol {
                    break;
                }
            }
            // one polishing step after the stopping test
            let (p, dp) = legendre(n, &x);
            x -= p / &dp;
            let (_, dp) = legendre(n, &x);
            let one_minus_x2 = Float::with_val(bits, 1u32 - Float::with_val(bits, &x * &x));
            let w = Float::with_val(bits, 2u32 / (one_minus_x2 * dp.square()));
            (x, w)
        })
        .collect();
    // half holds the non-negative roots in descending order; for odd n the
    // last one is the centre root, which is exactly zero
    let pairs = n / 2;
    let mut nodes: Vec<(Float, Float)> = Vec::with_capacity(n);
    for (x, w) in &half[..pairs] {
        nodes.push((Float::with_val(bits, -x), w.clone()));
    }
    if n % 2 == 1 {
        nodes.push((Float::with_val(bits, 0), half[pairs].1.clone()));
    }
    for (x, w) in half[..pairs].iter().rev() {
        nodes.push((x.clone(), w.clone()));
    }
    Ok(nodes)
}

fn apply<F>(f: &F, n: usize, a: &Float, b: &Float, ctx: &PrecCtx) -> Result<(Float, Float)>
where
    F: Fn(&Node) -> Result<Float> + Sync,
{
    let bits = ctx.working_bits();
    let c = Float::with_val(bits, a + b) / 2u32;
    let r = Float::with_val(bits, b - a) / 2u32;
    let rule = legendre_nodes(n, bits)?;
    let terms: Vec<(Float, Float)> = rule
        .par_iter()
        .map(|(t, w)| {
            let offset = Float::with_val(bits, &r * t);
            let node = Node {
                x: Float::with_val(bits, &c + &offset),
                from_a: Float::with_val(bits, &r + &offset),
                to_b: Float::with_val(bits, &r - &offset),
            };
            let v = f(&node)?;
            if !v.is_finite() {
                return Err(Error::Evaluation {
                    node: decimal_string(&node.x),
                    reason: format!("integrand returned {v}"),
                });
            }
            let term = Float::with_val(bits, w * &v);
            Ok((term.clone(), term.abs()))
        })
        .collect::<Result<_>>()?;
    let mut sum = ctx.zero();
    let mut abs = ctx.zero();
    for (t, a) in &terms {
        sum += t;
        abs += a;
    }
    Ok((sum * &r, abs * &r))
}

/// `n`-point Gauss–Legendre rule on `[a, b]`. The error estimate compares
/// against the `(n-1)`-point rule, so it is conservative for polynomials the
/// `n`-point rule integrates exactly.
pub fn gauss_legendre<F>(f: F, a: &Float, b: &Float, n: usize, ctx: &PrecCtx) -> Result<QuadResult>
where
    F: Fn(&Node) -> Result<Float> + Sync,
{
    if !(a < b) {
        return Err(Error::Domain("integration bounds must satisfy a < b".into()));
    }
    let (value, abs) = apply(&f, n, a, b, ctx)?;
    let bits = ctx.working_bits();
    let mut roundoff = abs;
    roundoff <<= 8;
    roundoff >>= bits;
    let err = if n > 1 {
        let (coarse, _) = apply(&f, n - 1, a, b, ctx)?;
        Float::with_val(bits, &value - &coarse).abs() + roundoff
    } else {
        Float::with_val(bits, value.clone().abs()) + roundoff
    };
    let evaluations = if n > 1 { 2 * n - 1 } else { 1 };
    Ok(QuadResult::new(ctx, value, err, evaluations as u64, 0))
}

//! One-dimensional evaluators of `L(Δ, k)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecCtx, UnitPoint};
use crate::quadrature::{integrate_1_inf, tanh_sinh, QuadResult, DEFAULT_MAX_LEVEL};
use crate::qexpansion::{shared_tau_table, TauTable};
use crate::special::hyper::f_unit;
use crate::special::modular::delta_raw;

/// Largest table the Dirichlet evaluator builds by default.
pub const DEFAULT_DIRICHLET_TERMS: usize = 4000;
/// Default tolerance for the nested quadrature of the double integrals.
pub const DEFAULT_TOLERANCE_2D: f64 = 1e-8;
/// Default refinement depth for each level of the double integrals.
pub const DEFAULT_MAX_LEVEL_2D: u32 = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub max_level: u32,
    pub max_level_2d: u32,
    pub tolerance_2d: f64,
    pub dirichlet_terms: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_level: DEFAULT_MAX_LEVEL,
            max_level_2d: DEFAULT_MAX_LEVEL_2D,
            tolerance_2d: DEFAULT_TOLERANCE_2D,
            dirichlet_terms: DEFAULT_DIRICHLET_TERMS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Dirichlet,
    Mellin,
    Critical,
    Theorem11,
    Corollary,
    Theorem31,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Dirichlet,
        Method::Mellin,
        Method::Critical,
        Method::Theorem11,
        Method::Corollary,
        Method::Theorem31,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Dirichlet => "dirichlet",
            Method::Mellin => "mellin",
            Method::Critical => "critical",
            Method::Theorem11 => "theorem11",
            Method::Corollary => "corollary",
            Method::Theorem31 => "theorem31",
        }
    }

    /// Human-readable range of `k` the method accepts.
    pub fn valid_range(&self) -> &'static str {
        match self {
            Method::Dirichlet => "k >= 12",
            Method::Mellin => "k >= 1",
            Method::Critical => "1 <= k <= 11",
            Method::Theorem11 => "k = 12",
            Method::Corollary => "k in {13, 14, 15}",
            Method::Theorem31 => "12 <= k <= 20",
        }
    }

    pub fn accepts(&self, k: i64) -> bool {
        match self {
            Method::Dirichlet => k >= 12,
            Method::Mellin => k >= 1,
            Method::Critical => (1..=11).contains(&k),
            Method::Theorem11 => k == 12,
            Method::Corollary => (13..=15).contains(&k),
            Method::Theorem31 => (12..=super::double::MAX_THEOREM_K).contains(&k),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown method `{s}`")))
    }
}

/// A value of `L(Δ, k)` with its error estimate and cost.
#[derive(Debug, Clone)]
pub struct LValue {
    pub k: i64,
    pub method: Method,
    pub value: BigReal,
    /// Absolute error estimate (a rigorous bound for the Dirichlet method).
    pub err_est: BigReal,
    pub nodes: u64,
    pub terms: u64,
    pub converged: bool,
    pub detail: Option<String>,
}

impl LValue {
    pub(crate) fn from_quad(k: i64, method: Method, q: QuadResult, scale: &Float, ctx: &PrecCtx) -> Self {
        let value = ctx.float(q.value() * scale);
        let err = ctx.float(q.err() * scale).abs();
        LValue {
            k,
            method,
            value: BigReal::from_float(ctx, value),
            err_est: BigReal::from_float(ctx, err),
            nodes: q.nodes,
            terms: 0,
            converged: q.converged,
            detail: q.detail,
        }
    }

    pub fn value(&self) -> &Float {
        self.value.as_float()
    }

    pub fn err(&self) -> &Float {
        self.err_est.as_float()
    }
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `1 + 24·2^-k + 2^(11-2k)`, the reciprocal Euler factor at 2 evaluated at `s = k`.
pub fn odd_part_factor(k: i64) -> Rational {
    let pow2 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from(Integer::from(1) << e as u32)
        } else {
            Rational::from((Integer::from(1), Integer::from(1) << (-e) as u32))
        }
    };
    Rational::from(1) + pow2(-k) * 24u32 + pow2(11 - 2 * k)
}

/// `Σ_{n>N} |τ(n)| n^-k <= 2 Σ_{n>N} n^{6-k} <= 2 N^{7-k} / (k - 7)`, from
/// `|τ(n)| <= d(n) n^{11/2}` and `d(n) <= 2 √n`.
pub fn dirichlet_tail_bound(k: i64, n: usize, ctx: &PrecCtx) -> Result<Float> {
    if k < 12 {
        return Err(Error::Domain(format!("the Dirichlet series needs k >= 12, got {k}")));
    }
    let bits = ctx.working_bits();
    let nf = Float::with_val(bits, n as u64);
    Ok(nf.pow(7 - k as i32) * 2u32 / (k as u32 - 7))
}

/// Smallest `N` whose tail bound is below `2^-tail_bits`.
fn dirichlet_terms_needed(k: i64, ctx: &PrecCtx) -> usize {
    let m = (k - 7) as f64;
    let log2_n = (1.0 + f64::from(ctx.tail_bits()) - m.log2()) / m;
    if log2_n > 40.0 {
        usize::MAX
    } else {
        (log2_n.exp2().ceil() as usize).max(1)
    }
}

/// Partial sum of `Σ τ(n) n^-k` over the whole table, with its tail bound.
pub fn l_dirichlet_with_table(k: i64, table: &TauTable, ctx: &PrecCtx) -> Result<LValue> {
    let tail = dirichlet_tail_bound(k, table.limit(), ctx)?;
    if let Some(n) = table.deligne_violation() {
        return Err(Error::Evaluation {
            node: format!("n = {n}"),
            reason: "τ table violates |τ(n)| <= d(n) n^(11/2)".into(),
        });
    }
    let bits = ctx.working_bits();
    let mut sum = ctx.zero();
    for (n, t) in table.iter() {
        let inv = Float::with_val(bits, n as u64).pow(-(k as i32));
        sum += inv * t;
    }
    Ok(LValue {
        k,
        method: Method::Dirichlet,
        value: BigReal::from_float(ctx, sum),
        err_est: BigReal::from_float(ctx, tail),
        nodes: 0,
        terms: table.limit() as u64,
        converged: true,
        detail: None,
    })
}

/// `L(Δ, k) = Σ τ(n) n^-k` for `k >= 12`. The table is as short as the tail
/// bound allows, capped at `opts.dirichlet_terms`; `err_est` is the rigorous
/// tail bound, which at the cap may exceed `2^-target_bits`.
pub fn l_dirichlet(k: i64, ctx: &PrecCtx, opts: &EvalOptions) -> Result<LValue> {
    if k < 12 {
        return Err(Error::Domain(format!(
            "the Dirichlet series needs k >= 12, got {k}; use the Mellin method"
        )));
    }
    let n = dirichlet_terms_needed(k, ctx).min(opts.dirichlet_terms.max(1));
    let table: Arc<TauTable> = shared_tau_table(n)?;
    let table = if table.limit() == n { table } else { Arc::new(table.truncated(n)) };
    l_dirichlet_with_table(k, &table, ctx)
}

/// `Σ_{n odd} τ(n) n^-k` over the first `n` coefficients.
pub fn dirichlet_odd_partial(k: i64, n: usize, ctx: &PrecCtx) -> Result<Float> {
    let table = shared_tau_table(n)?;
    let bits = ctx.working_bits();
    let mut sum = ctx.zero();
    for (m, t) in table.iter().take(n).filter(|(m, _)| m % 2 == 1) {
        sum += Float::with_val(bits, m as u64).pow(-(k as i32)) * t;
    }
    Ok(sum)
}

/// `L(Δ, k) = (2π)^k/(k-1)! ∫_1^∞ (u^{k-1} + u^{11-k}) Δ(iu) du`.
pub fn l_mellin(k: i64, ctx: &PrecCtx, opts: &EvalOptions) -> Result<LValue> {
    if k < 1 {
        return Err(Error::Domain(format!("the Mellin integral needs k >= 1, got {k}")));
    }
    if k > 200 {
        return Err(Error::Domain(format!("k = {k} is beyond the supported range")));
    }
    let bits = ctx.working_bits();
    let q = integrate_1_inf(
        |node| {
            let u = &node.x;
            let (d, _) = delta_raw(u, ctx)?;
            let a = Float::with_val(bits, u.pow(k as i32 - 1));
            let b = Float::with_val(bits, u.pow(11 - k as i32));
            Ok(d * (a + b))
        },
        ctx,
        opts.max_level,
    )?;
    let two_pi = ctx.pi() * 2u32;
    let scale = two_pi.pow(k as i32) / ctx.float(&factorial(k as u32 - 1));
    Ok(LValue::from_quad(k, Method::Mellin, q, &scale, ctx))
}

fn unit_from_node(from_a: &Float, to_b: &Float) -> Result<UnitPoint> {
    UnitPoint::from_pair(from_a.clone(), to_b.clone())
}

/// `π^{k-1}/(16 (k-1)!) ∫_0^1 (1-α)^3 F(α)^{11-k} F(1-α)^{k-1} dα` for `1 <= k <= 11`.
pub fn critical_l_integral(k: i64, ctx: &PrecCtx, opts: &EvalOptions) -> Result<LValue> {
    if !(1..=11).contains(&k) {
        return Err(Error::Domain(format!("the critical-value integral needs 1 <= k <= 11, got {k}")));
    }
    let k32 = k as u32;
    let bits = ctx.working_bits();
    let q = tanh_sinh(
        |node| {
            let p = unit_from_node(&node.from_a, &node.to_b)?;
            let fa = f_unit(&p, ctx);
            let fc = f_unit(&p.flipped(), ctx);
            let c3 = Float::with_val(bits, p.comp.clone().pow(3u32));
            Ok(c3 * fa.pow(11 - k32) * fc.pow(k32 - 1))
        },
        &ctx.zero(),
        &ctx.one(),
        ctx,
        opts.max_level,
    )?;
    let scale = ctx.pi().pow(k32 - 1) / ctx.float(&(factorial(k32 - 1) * 16u32));
    Ok(LValue::from_quad(k, Method::Critical, q, &scale, ctx))
}

/// Coefficients of `2 + 251α + 876α² + 251α³ + 2α⁴`.
pub const L12_POLY: [i64; 5] = [2, 251, 876, 251, 2];

pub(crate) fn eval_int_poly(c: &[i64], x: &Float) -> Float {
    let mut acc = Float::new(x.prec());
    for &v in c.iter().rev() {
        acc *= x;
        acc += v;
    }
    acc
}

/// `[F(α)F(1-α)]^5 (2+251α+876α²+251α³+2α⁴)/(1-α) log α`.
pub fn l12_integrand(p: &UnitPoint, ctx: &PrecCtx) -> Float {
    let bits = ctx.working_bits();
    let ff = f_unit(p, ctx) * f_unit(&p.flipped(), ctx);
    // log1p(-(1-α)) stays accurate as α → 1
    let log_a = if p.x <= 0.5 {
        Float::with_val(bits, p.x.ln_ref())
    } else {
        Float::with_val(bits, -&p.comp).ln_1p()
    };
    let poly = eval_int_poly(&L12_POLY, &p.x);
    ff.pow(5u32) * poly * log_a / &p.comp
}

/// `-(128 π^11)/(8241·11!) ∫_0^1 [F(α)F(1-α)]^5 (2+251α+876α²+251α³+2α⁴)/(1-α) log α dα`.
pub fn l12_log_integral(ctx: &PrecCtx, opts: &EvalOptions) -> Result<LValue> {
    let q = tanh_sinh(
        |node| Ok(l12_integrand(&unit_from_node(&node.from_a, &node.to_b)?, ctx)),
        &ctx.zero(),
        &ctx.one(),
        ctx,
        opts.max_level,
    )?;
    let denom = factorial(11) * 8241u32;
    let scale = -(ctx.pi().pow(11u32) * 128u32) / ctx.float(&denom);
    Ok(LValue::from_quad(12, Method::Theorem11, q, &scale, ctx))
}

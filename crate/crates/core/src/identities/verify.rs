//! Named identity checks and the suites that group them.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

use super::double::{corollary_l, reference_polynomial, theorem_double};
use super::lvalues::{
    critical_l_integral, eval_int_poly, l12_log_integral, l_dirichlet, l_mellin, EvalOptions, LValue, Method,
    L12_POLY,
};
use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecCtx, UnitPoint};
use crate::qexpansion::{shared_tau_table, tau_structure_check, verify_decomposition, verify_ramanujan_1728};
use crate::report::{Policy, VerificationReport};
use crate::special::hyper::{alpha_point_unit, f_unit};
use crate::special::relation::discovered_polynomial;
use crate::special::theta::alpha_unit_from_u;
use crate::special::{f_elliptic_quad, f_hyper, lambert_weight11, theta_quotient_product, CombinationSpec};

pub const DEFAULT_TOL_1D: f64 = 1e-20;
pub const DEFAULT_TOL_THEOREM11: f64 = 1e-15;
pub const DEFAULT_TOL_BUILDING_BLOCKS: f64 = 1e-25;

/// Grid of `u` values for the building-block identities.
pub const U_GRID: [&str; 10] = ["0.3", "0.4", "0.5", "0.6", "0.75", "0.9", "1", "1.25", "1.6", "2"];
/// Grid of α values for the function-level cross-checks.
pub const ALPHA_GRID: [&str; 10] = ["0.01", "0.1", "0.25", "0.3333333333333333333333333333333333333333", "0.5", "0.6", "0.75", "0.9", "0.97", "0.999"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    Lemma21,
    Ramanujan1728,
    TauStructure,
    L12Extra1,
    L12Extra2,
    PolyP8,
    PolyQ8,
    PolyP10,
    PolyQ10,
    Critical,
    Theorem11,
    Corollary,
    Theorem31,
    FunctionalEq,
    FCrossCheck,
    Roundtrip,
}

impl IdentityId {
    pub const ALL: [IdentityId; 16] = [
        IdentityId::Lemma21,
        IdentityId::Ramanujan1728,
        IdentityId::TauStructure,
        IdentityId::L12Extra1,
        IdentityId::L12Extra2,
        IdentityId::PolyP8,
        IdentityId::PolyQ8,
        IdentityId::PolyP10,
        IdentityId::PolyQ10,
        IdentityId::Critical,
        IdentityId::Theorem11,
        IdentityId::Corollary,
        IdentityId::Theorem31,
        IdentityId::FunctionalEq,
        IdentityId::FCrossCheck,
        IdentityId::Roundtrip,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Lemma21 => "lemma21",
            IdentityId::Ramanujan1728 => "ramanujan1728",
            IdentityId::TauStructure => "tau_structure",
            IdentityId::L12Extra1 => "l12_extra1",
            IdentityId::L12Extra2 => "l12_extra2",
            IdentityId::PolyP8 => "poly_P8",
            IdentityId::PolyQ8 => "poly_Q8",
            IdentityId::PolyP10 => "poly_P10",
            IdentityId::PolyQ10 => "poly_Q10",
            IdentityId::Critical => "critical_k",
            IdentityId::Theorem11 => "theorem11",
            IdentityId::Corollary => "corollary_k",
            IdentityId::Theorem31 => "theorem31_k",
            IdentityId::FunctionalEq => "functional_eq_k",
            IdentityId::FCrossCheck => "f_cross_check",
            IdentityId::Roundtrip => "roundtrip",
        }
    }

    /// The values of `k` an identity is checked at when none is given.
    pub fn default_ks(&self) -> Vec<i64> {
        match self {
            IdentityId::Critical => (1..=11).collect(),
            IdentityId::Corollary => vec![13, 14, 15],
            IdentityId::Theorem31 => vec![12, 13, 14, 15],
            IdentityId::FunctionalEq => (1..=5).collect(),
            _ => Vec::new(),
        }
    }

    pub fn takes_k(&self) -> bool {
        !self.default_ks().is_empty()
    }

    fn k_allowed(&self, k: i64) -> bool {
        match self {
            IdentityId::Critical => (1..=11).contains(&k),
            IdentityId::Corollary => (13..=15).contains(&k),
            IdentityId::Theorem31 => (12..=super::double::MAX_THEOREM_K).contains(&k),
            IdentityId::FunctionalEq => (1..=11).contains(&k),
            _ => false,
        }
    }

    pub fn default_tolerance(&self, ctx: &PrecCtx, opts: &EvalOptions) -> f64 {
        match self {
            IdentityId::Lemma21
            | IdentityId::Ramanujan1728
            | IdentityId::TauStructure
            | IdentityId::PolyP8
            | IdentityId::PolyQ8
            | IdentityId::PolyP10
            | IdentityId::PolyQ10 => 0.0,
            IdentityId::L12Extra1 | IdentityId::L12Extra2 | IdentityId::FCrossCheck => DEFAULT_TOL_BUILDING_BLOCKS,
            IdentityId::Critical | IdentityId::FunctionalEq => DEFAULT_TOL_1D,
            IdentityId::Theorem11 => DEFAULT_TOL_THEOREM11,
            IdentityId::Corollary | IdentityId::Theorem31 => opts.tolerance_2d,
            IdentityId::Roundtrip => (10.0 - f64::from(ctx.target_bits())).exp2(),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Accepts the listed names, the stem without `_k` (`critical`), and a
/// suffixed value (`critical_6`), returning the embedded `k` if any.
pub fn parse_identity(s: &str) -> Result<(IdentityId, Option<i64>)> {
    for id in IdentityId::ALL {
        let name = id.as_str();
        if s == name {
            return Ok((id, None));
        }
        if let Some(stem) = name.strip_suffix("_k") {
            if s == stem {
                return Ok((id, None));
            }
            if let Some(k) = s.strip_prefix(stem).and_then(|r| r.strip_prefix('_')) {
                if let Ok(k) = k.parse::<i64>() {
                    return Ok((id, Some(k)));
                }
            }
        }
    }
    Err(Error::Usage(format!("unknown identity `{s}`")))
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_identity(s).map(|(id, _)| id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Exact,
    Analytic1d,
    Analytic2d,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Exact => "exact",
            Suite::Analytic1d => "analytic1d",
            Suite::Analytic2d => "analytic2d",
            Suite::All => "all",
        }
    }

    pub fn members(&self) -> Vec<IdentityId> {
        use IdentityId::*;
        let exact = [Lemma21, Ramanujan1728, TauStructure];
        let one_d = [
            L12Extra1, L12Extra2, PolyP8, PolyQ8, PolyP10, PolyQ10, Critical, Theorem11, FunctionalEq, FCrossCheck,
            Roundtrip,
        ];
        let two_d = [Corollary, Theorem31];
        match self {
            Suite::Exact => exact.to_vec(),
            Suite::Analytic1d => one_d.to_vec(),
            Suite::Analytic2d => two_d.to_vec(),
            Suite::All => exact.iter().chain(&one_d).chain(&two_d).copied().collect(),
        }
    }

    /// One `(identity, k)` job per report, in output order.
    pub fn jobs(&self) -> Vec<(IdentityId, Option<i64>)> {
        self.members()
            .into_iter()
            .flat_map(|id| {
                let ks = id.default_ks();
                if ks.is_empty() {
                    vec![(id, None)]
                } else {
                    ks.into_iter().map(|k| (id, Some(k))).collect()
                }
            })
            .collect()
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::Exact, Suite::Analytic1d, Suite::Analytic2d, Suite::All]
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyParams {
    pub k: Option<i64>,
    /// Number of q-coefficients for the exact checks.
    pub n: Option<usize>,
    pub tolerance: Option<f64>,
    pub opts: EvalOptions,
}

/// `L(Δ, k)` by the named method, refusing inapplicable `k` with a usage error.
pub fn evaluate(method: Method, k: i64, ctx: &PrecCtx, opts: &EvalOptions) -> Result<LValue> {
    if !method.accepts(k) {
        return Err(Error::Usage(format!(
            "method {method} needs {}, got k = {k}",
            method.valid_range()
        )));
    }
    match method {
        Method::Dirichlet => l_dirichlet(k, ctx, opts),
        Method::Mellin => l_mellin(k, ctx, opts),
        Method::Critical => critical_l_integral(k, ctx, opts),
        Method::Theorem11 => l12_log_integral(ctx, opts),
        Method::Corollary => corollary_l(k, ctx, opts),
        Method::Theorem31 => theorem_double(k, ctx, opts),
    }
}

fn compare(id: &str, k: i64, lhs: &LValue, rhs: &LValue, tol: f64) -> VerificationReport {
    VerificationReport::numeric(
        id,
        Some(k),
        lhs.value(),
        rhs.value(),
        tol,
        Policy::Relative,
        lhs.converged && rhs.converged,
        lhs.nodes + rhs.nodes,
        lhs.terms + rhs.terms,
    )
}

fn factorial(n: i64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

fn grid_report(id: IdentityId, parts: Vec<VerificationReport>) -> VerificationReport {
    VerificationReport::combine(id.as_str(), &parts)
}

fn poly_report(id: IdentityId, ctx: &PrecCtx) -> Result<VerificationReport> {
    let (spec, name) = match id {
        IdentityId::PolyP8 => (CombinationSpec::p(8)?, "P8"),
        IdentityId::PolyQ8 => (CombinationSpec::q(8)?, "Q8"),
        IdentityId::PolyP10 => (CombinationSpec::p(10)?, "P10"),
        _ => (CombinationSpec::q(10)?, "Q10"),
    };
    let dctx = if ctx.target_bits() >= 128 { *ctx } else { PrecCtx::new(128) };
    let found = discovered_polynomial(&spec, &dctx)?;
    let reference = reference_polynomial(name).expect("known name");
    let len = found.coeffs.len().max(reference.coeffs.len());
    let zero = rug::Rational::new();
    let mismatch = (0..len)
        .find(|&i| found.coeffs.get(i).unwrap_or(&zero) != reference.coeffs.get(i).unwrap_or(&zero))
        .map(|i| i as u64);
    Ok(VerificationReport::exact(
        id.as_str(),
        found.to_string(),
        reference.to_string(),
        len as u64,
        mismatch,
    ))
}

fn parse_grid(ctx: &PrecCtx, grid: &[&str]) -> Result<Vec<BigReal>> {
    grid.iter().map(|s| BigReal::parse(ctx, s)).collect()
}

fn run_one(id: IdentityId, k: Option<i64>, params: &VerifyParams, ctx: &PrecCtx) -> Result<VerificationReport> {
    let opts = &params.opts;
    let tol = params.tolerance.unwrap_or_else(|| id.default_tolerance(ctx, opts));
    let bits = ctx.working_bits();
    let report = match id {
        IdentityId::Lemma21 => verify_decomposition(params.n.unwrap_or(1000))?,
        IdentityId::Ramanujan1728 => verify_ramanujan_1728(params.n.unwrap_or(500))?,
        IdentityId::TauStructure => {
            let n = params.n.unwrap_or(1000);
            tau_structure_check(shared_tau_table(n)?.as_ref(), n)?
        }
        IdentityId::L12Extra1 => {
            let parts = parse_grid(ctx, &U_GRID)?
                .par_iter()
                .map(|u| {
                    let lhs = theta_quotient_product(u, ctx)?;
                    let a = alpha_unit_from_u(u.as_float(), ctx)?;
                    let rhs = Float::with_val(bits, (&a.x).pow(-0.125f64));
                    Ok(VerificationReport::numeric(
                        id.as_str(), None, lhs.as_float(), &rhs, tol, Policy::Relative, true, 0, 1,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            grid_report(id, parts)
        }
        IdentityId::L12Extra2 => {
            let parts = parse_grid(ctx, &U_GRID)?
                .par_iter()
                .map(|u| {
                    let lhs = lambert_weight11(u, ctx)?;
                    let a = alpha_unit_from_u(u.as_float(), ctx)?;
                    let f12 = f_unit(&a, ctx).pow(12u32);
                    let rhs = eval_int_poly(&L12_POLY, &a.x) * &a.x * f12 / 32u32;
                    Ok(VerificationReport::numeric(
                        id.as_str(), None, lhs.as_float(), &rhs, tol, Policy::Relative, true, 0, 1,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            grid_report(id, parts)
        }
        IdentityId::PolyP8 | IdentityId::PolyQ8 | IdentityId::PolyP10 | IdentityId::PolyQ10 => poly_report(id, ctx)?,
        IdentityId::Critical => {
            let k = k.expect("k resolved by caller");
            let lhs = critical_l_integral(k, ctx, opts)?;
            let rhs = l_mellin(k, ctx, opts)?;
            compare(id.as_str(), k, &lhs, &rhs, tol)
        }
        IdentityId::Theorem11 => {
            let lhs = l12_log_integral(ctx, opts)?;
            let rhs = l_dirichlet(12, ctx, opts)?;
            compare(id.as_str(), 12, &lhs, &rhs, tol)
        }
        IdentityId::Corollary => {
            let k = k.expect("k resolved by caller");
            let lhs = corollary_l(k, ctx, opts)?;
            let rhs = l_dirichlet(k, ctx, opts)?;
            compare(id.as_str(), k, &lhs, &rhs, tol)
        }
        IdentityId::Theorem31 => {
            let k = k.expect("k resolved by caller");
            let lhs = theorem_double(k, ctx, opts)?;
            let rhs = l_dirichlet(k, ctx, opts)?;
            compare(id.as_str(), k, &lhs, &rhs, tol)
        }
        IdentityId::FunctionalEq => {
            let k = k.expect("k resolved by caller");
            let lk = l_mellin(k, ctx, opts)?;
            let lm = l_mellin(12 - k, ctx, opts)?;
            let two_pi = ctx.pi() * 2u32;
            // (2π)^{k-12} Γ(12-k) L(12-k)  vs  (2π)^{-k} Γ(k) L(k)
            let lhs = Float::with_val(bits, (&two_pi).pow(k as i32 - 12)) * ctx.float(&factorial(11 - k)) * lm.value();
            let rhs = Float::with_val(bits, (&two_pi).pow(-(k as i32))) * ctx.float(&factorial(k - 1)) * lk.value();
            VerificationReport::numeric(
                id.as_str(),
                Some(k),
                &lhs,
                &rhs,
                tol,
                Policy::Relative,
                lk.converged && lm.converged,
                lk.nodes + lm.nodes,
                0,
            )
        }
        IdentityId::FCrossCheck => {
            let parts = parse_grid(ctx, &ALPHA_GRID)?
                .par_iter()
                .map(|a| {
                    let lhs = f_hyper(a, ctx)?;
                    let (rhs, converged) = match f_elliptic_quad(a, ctx) {
                        Ok(v) => (v.into_float(), true),
                        Err(Error::Unconverged(_)) => (ctx.zero(), false),
                        Err(e) => return Err(e),
                    };
                    Ok(VerificationReport::numeric(
                        id.as_str(), None, lhs.as_float(), &rhs, tol, Policy::Relative, converged, 0, 1,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            grid_report(id, parts)
        }
        IdentityId::Roundtrip => {
            let parts = parse_grid(ctx, &ALPHA_GRID)?
                .par_iter()
                .map(|a| {
                    let p = UnitPoint::new(a.as_float().clone())?;
                    let u = alpha_point_unit(&p, ctx).u;
                    let back = alpha_unit_from_u(u.as_float(), ctx)?;
                    // compare the smaller of α and 1-α so relative error is meaningful near 1
                    let (lhs, rhs) = if p.x <= 0.5 { (back.x, p.x) } else { (back.comp, p.comp) };
                    Ok(VerificationReport::numeric(
                        id.as_str(), None, &lhs, &rhs, tol, Policy::Relative, true, 0, 1,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            grid_report(id, parts)
        }
    };
    Ok(match k {
        Some(k) => report.with_k(k),
        None => report,
    })
}

/// Runs one identity. Identities indexed by `k` are checked at `params.k`,
/// or at each of their default values (combined into one report) when absent.
pub fn verify(id: IdentityId, params: &VerifyParams, ctx: &PrecCtx) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = if id.takes_k() {
        match params.k {
            Some(k) if !id.k_allowed(k) => {
                return Err(Error::Usage(format!("{id} is not defined at k = {k}")));
            }
            Some(k) => run_one(id, Some(k), params, ctx)?,
            None => {
                let parts = id
                    .default_ks()
                    .into_iter()
                    .map(|k| run_one(id, Some(k), params, ctx))
                    .collect::<Result<Vec<_>>>()?;
                VerificationReport::combine(id.as_str(), &parts)
            }
        }
    } else {
        if params.k.is_some() {
            return Err(Error::Usage(format!("{id} does not take k")));
        }
        run_one(id, None, params, ctx)?
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// All reports of a suite, one per `(identity, k)`, in a fixed order.
pub fn run_suite(suite: Suite, params: &VerifyParams, ctx: &PrecCtx) -> Vec<Result<VerificationReport>> {
    suite
        .jobs()
        .par_iter()
        .map(|&(id, k)| {
            let p = VerifyParams { k, ..*params };
            verify(id, &p, ctx)
        })
        .collect()
}

//! Modular forms evaluated on the imaginary axis: Δ(iu), Eisenstein series
//! `E_k(j·iu)` and their fixed linear combinations.

use rug::ops::Pow;
use rug::{Float, Rational};

use super::hyper::{f_unit, u_from_unit};
use super::relation;
use super::theta::check_positive;
use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecCtx, UnitPoint};
use crate::qexpansion::{shared_tau_table, zeta_one_minus};

/// Below this `u` the involution `Δ(i/u) = u^12 Δ(iu)` is applied first.
pub const DELTA_INVOLUTION_POINT: f64 = 0.5;

/// Smallest `j·u` accepted for direct Eisenstein summation.
pub const EISENSTEIN_MIN_ARG: f64 = 0.05;

fn nome(x: &Float, ctx: &PrecCtx) -> Float {
    let bits = ctx.working_bits();
    Float::with_val(bits, -Float::with_val(bits, x * ctx.pi()) * 2u32).exp()
}

/// Number of terms after which `2 n^6 q^n` has fallen below `2^-bits q`.
fn delta_term_estimate(log_q: f64, bits: u32) -> usize {
    let target = -(f64::from(bits) + 8.0) * std::f64::consts::LN_2;
    let mut n = 2usize;
    while std::f64::consts::LN_2 + 6.0 * (n as f64).ln() + (n as f64 - 1.0) * log_q > target {
        n += 1;
    }
    n
}

/// `Σ τ(n) q^n` for `u >= 1/2`, with the tail bounded through
/// `|τ(n)| <= d(n) n^{11/2} <= 2 n^6`.
fn delta_direct(u: &Float, ctx: &PrecCtx) -> Result<(Float, u64)> {
    let bits = ctx.working_bits();
    let q = nome(u, ctx);
    if q.is_zero() {
        return Ok((q, 0));
    }
    let log_q = -2.0 * std::f64::consts::PI * u.to_f64();
    let mut n_terms = delta_term_estimate(log_q, ctx.tail_bits());
    loop {
        let table = shared_tau_table(n_terms.max(64) + 1)?;
        let mut sum = ctx.zero();
        let mut qn = ctx.one();
        for n in 1..=n_terms {
            qn *= &q;
            let tau = table.tau(n).expect("table covers the requested terms");
            sum += Float::with_val(bits, tau) * &qn;
        }
        // geometric majorant of Σ_{n > N} 2 n^6 q^n
        let m = n_terms as f64 + 1.0;
        let growth = ((m + 1.0) / m).powi(6);
        let rho = Float::with_val(bits, &q * growth);
        if rho < 1 {
            let next = Float::with_val(bits, &qn * &q) * (2.0 * m.powi(6));
            let tail = next / Float::with_val(bits, 1u32 - &rho);
            let scale = Float::with_val(bits, sum.clone().abs());
            if tail <= Float::with_val(bits, &scale * ctx.series_tail_eps()) {
                return Ok((sum, n_terms as u64));
            }
        }
        n_terms *= 2;
        if n_terms > crate::qexpansion::DEFAULT_MAX_ORDER {
            return Err(Error::Resource("Δ(iu) series did not settle".into()));
        }
    }
}

pub(crate) fn delta_raw(u: &Float, ctx: &PrecCtx) -> Result<(Float, u64)> {
    check_positive(u, "delta_at")?;
    if *u >= DELTA_INVOLUTION_POINT {
        return delta_direct(u, ctx);
    }
    let bits = ctx.working_bits();
    let inv = Float::with_val(bits, u.recip_ref());
    let (d, terms) = delta_direct(&inv, ctx)?;
    // Δ(iu) = u^{-12} Δ(i/u)
    Ok((d * inv.pow(12u32), terms))
}

/// `Δ(iu) = Σ τ(n) e^{-2πnu}`.
pub fn delta_at(u: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    u.check(ctx)?;
    let (v, _) = delta_raw(u.as_float(), ctx)?;
    Ok(BigReal::from_float(ctx, v))
}

/// `(1/16) α (1 - α)^4 F(α)^12`.
pub fn delta_from_alpha(alpha: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    alpha.check(ctx)?;
    let p = UnitPoint::new(alpha.as_float().clone())?;
    Ok(BigReal::from_float(ctx, delta_from_unit(&p, ctx)))
}

pub(crate) fn delta_from_unit(p: &UnitPoint, ctx: &PrecCtx) -> Float {
    let bits = ctx.working_bits();
    let f = f_unit(p, ctx);
    let c4 = Float::with_val(bits, p.comp.clone().pow(4u32));
    Float::with_val(bits, &p.x * c4) * f.pow(12u32) / 16u32
}

fn check_weight(k: u32) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Domain(format!("expected an even weight >= 2, got {k}")));
    }
    Ok(())
}

/// `E_k(ix) = 1 + (2/ζ(1-k)) Σ n^{k-1} q^n / (1 - q^n)` with `q = e^{-2πx}`.
/// Terms are bounded by `n^{k-1} q^n / (1 - q)`, whose ratio tends to `q`.
pub(crate) fn eisenstein_direct(k: u32, x: &Float, ctx: &PrecCtx) -> Result<Float> {
    check_weight(k)?;
    let bits = ctx.working_bits();
    let q = nome(x, ctx);
    let scale = ctx.rational(&(Rational::from(2) / zeta_one_minus(k)?));
    if q.is_zero() {
        return Ok(ctx.one());
    }
    let eps = ctx.series_tail_eps();
    let one_minus_q = Float::with_val(bits, 1u32 - &q);
    let mut sum = ctx.zero();
    let mut qn = ctx.one();
    let mut n: u32 = 0;
    loop {
        n += 1;
        qn *= &q;
        let denom = Float::with_val(bits, 1u32 - &qn);
        let npow = Float::with_val(bits, n).pow(k - 1);
        sum += npow * &qn / denom;
        let m = f64::from(n) + 1.0;
        let rho = Float::with_val(bits, &q * ((m + 1.0) / m).powi(k as i32 - 1));
        if rho < 1 {
            let next = Float::with_val(bits, &qn * &q) * Float::with_val(bits, m).pow(k - 1) / &one_minus_q;
            let tail = next / Float::with_val(bits, 1u32 - &rho);
            let mag = Float::with_val(bits, &sum * &scale).abs().max(&ctx.one());
            if Float::with_val(bits, &tail * &scale).abs() < Float::with_val(bits, &mag * &eps) {
                break;
            }
        }
    }
    Ok(sum * scale + 1u32)
}

/// How `eisenstein_at` obtains its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EisensteinRoute {
    /// Lambert series; refused when `j·u < 0.05`.
    Direct,
    /// `p(α) F(α)^k` with `p` found by relation discovery; valid for all `u > 0`.
    AlphaPolynomial,
}

/// `E_k(j·iu)` for `j ∈ {1, 2, 4}`.
pub fn eisenstein_at(k: u32, j: u32, u: &BigReal, ctx: &PrecCtx, route: EisensteinRoute) -> Result<BigReal> {
    u.check(ctx)?;
    check_positive(u.as_float(), "eisenstein_at")?;
    check_weight(k)?;
    if ![1, 2, 4].contains(&j) {
        return Err(Error::Domain(format!("scale must be 1, 2 or 4, got {j}")));
    }
    let spec = CombinationSpec::single(k, j)?;
    match route {
        EisensteinRoute::Direct => {
            let x = Float::with_val(ctx.working_bits(), u.as_float() * j);
            if x < EISENSTEIN_MIN_ARG {
                return Err(Error::SlowConvergence(format!(
                    "E_{k} at {j}·iu with u = {} is below the direct-summation cutoff {EISENSTEIN_MIN_ARG}; use the α-polynomial route",
                    u.to_decimal_string()
                )));
            }
            Ok(BigReal::from_float(ctx, eisenstein_direct(k, &x, ctx)?))
        }
        EisensteinRoute::AlphaPolynomial => relation::combination_via_alpha(&spec, u, ctx),
    }
}

/// `Σ n^11 q^n / (1 - q^{2n})`, `q = e^{-2πu}`.
pub fn lambert_weight11(u: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    u.check(ctx)?;
    check_positive(u.as_float(), "lambert_weight11")?;
    let bits = ctx.working_bits();
    let q = nome(u.as_float(), ctx);
    if q.is_zero() {
        return Ok(BigReal::from_float(ctx, q));
    }
    let eps = ctx.series_tail_eps();
    let q2 = Float::with_val(bits, q.square_ref());
    let one_minus_q2 = Float::with_val(bits, 1u32 - &q2);
    let mut sum = ctx.zero();
    let mut qn = ctx.one();
    let mut n: u32 = 0;
    loop {
        n += 1;
        qn *= &q;
        let q2n = Float::with_val(bits, qn.square_ref());
        sum += Float::with_val(bits, n).pow(11u32) * &qn / Float::with_val(bits, 1u32 - q2n);
        let m = f64::from(n) + 1.0;
        let rho = Float::with_val(bits, &q * ((m + 1.0) / m).powi(11));
        if rho < 1 {
            let next = Float::with_val(bits, &qn * &q) * Float::with_val(bits, m).pow(11u32) / &one_minus_q2;
            let tail = next / Float::with_val(bits, 1u32 - &rho);
            if tail < Float::with_val(bits, &sum * &eps) {
                break;
            }
        }
    }
    Ok(BigReal::from_float(ctx, sum))
}

/// `Σ c_j E_k(j·iu)` over scales `j ∈ {1, 2, 4}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombinationSpec {
    pub name: String,
    pub weight: u32,
    pub terms: Vec<(u32, Rational)>,
}

impl CombinationSpec {
    pub fn new(name: impl Into<String>, weight: u32, terms: Vec<(u32, Rational)>) -> Result<Self> {
        check_weight(weight)?;
        if terms.is_empty() {
            return Err(Error::Domain("a combination needs at least one term".into()));
        }
        if let Some((j, _)) = terms.iter().find(|(j, _)| ![1, 2, 4].contains(j)) {
            return Err(Error::Domain(format!("scale must be 1, 2 or 4, got {j}")));
        }
        Ok(CombinationSpec {
            name: name.into(),
            weight,
            terms,
        })
    }

    pub fn single(weight: u32, scale: u32) -> Result<Self> {
        Self::new(format!("E{weight}({scale}iu)"), weight, vec![(scale, Rational::from(1))])
    }

    fn pow2(e: u32) -> Rational {
        Rational::from(rug::Integer::from(1) << e)
    }

    /// `P_k(u) = E_k(iu) - (2 + 2^k) E_k(2iu) + 2^{k+1} E_k(4iu)`.
    pub fn p(k: u32) -> Result<Self> {
        let terms = vec![
            (1, Rational::from(1)),
            (2, -(Rational::from(2) + Self::pow2(k))),
            (4, Self::pow2(k + 1)),
        ];
        Self::new(format!("P{k}"), k, terms)
    }

    /// `Q_k(z) = E_k(iz) - E_k(2iz)`.
    pub fn q(k: u32) -> Result<Self> {
        Self::new(format!("Q{k}"), k, vec![(1, Rational::from(1)), (2, Rational::from(-1))])
    }

    /// `R_k(u) = E_k(2iu) - 2^k E_k(4iu)`.
    pub fn r(k: u32) -> Result<Self> {
        Self::new(format!("R{k}"), k, vec![(2, Rational::from(1)), (4, -Self::pow2(k))])
    }

    /// `S_k(z) = E_k(iz) - (1 + 2^{k-1}) E_k(2iz) + 2^{k-1} E_k(4iz)`.
    pub fn s(k: u32) -> Result<Self> {
        check_weight(k)?;
        let terms = vec![
            (1, Rational::from(1)),
            (2, -(Rational::from(1) + Self::pow2(k - 1))),
            (4, Self::pow2(k - 1)),
        ];
        Self::new(format!("S{k}"), k, terms)
    }

    /// Sum of `|c_j|`, the amplification of rounding errors in the terms.
    pub fn coefficient_norm(&self) -> Rational {
        self.terms
            .iter()
            .fold(Rational::new(), |acc, (_, c)| acc + Rational::from(c.abs_ref()))
    }
}

/// Direct evaluation of a combination, also returning `Σ |c_j E_k(j·iu)|`.
pub(crate) fn combination_raw(spec: &CombinationSpec, u: &Float, ctx: &PrecCtx) -> Result<(Float, Float)> {
    let bits = ctx.working_bits();
    let mut sum = ctx.zero();
    let mut scale = ctx.zero();
    for (j, c) in &spec.terms {
        let x = Float::with_val(bits, u * *j);
        if x < EISENSTEIN_MIN_ARG {
            return Err(Error::SlowConvergence(format!(
                "{} needs E_{} at argument {} below the direct-summation cutoff",
                spec.name,
                spec.weight,
                x.to_f64()
            )));
        }
        let e = eisenstein_direct(spec.weight, &x, ctx)?;
        let term = e * ctx.rational(c);
        scale += Float::with_val(bits, term.abs_ref());
        sum += term;
    }
    Ok((sum, scale))
}

pub fn combination_at(spec: &CombinationSpec, u: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    u.check(ctx)?;
    check_positive(u.as_float(), "combination_at")?;
    let (v, _) = combination_raw(spec, u.as_float(), ctx)?;
    Ok(BigReal::from_float(ctx, v))
}

/// `u` at a unit point, exposed for the relation search.
pub(crate) fn u_at(p: &UnitPoint, ctx: &PrecCtx) -> Float {
    u_from_unit(p, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::rel_err;
    use crate::special::theta::alpha_from_u;

    fn ctx() -> PrecCtx {
        PrecCtx::new(128)
    }

    fn big(c: &PrecCtx, s: &str) -> BigReal {
        BigReal::parse(c, s).unwrap()
    }

    #[test]
    fn delta_large_u_is_first_term() {
        let c = ctx();
        let d = delta_at(&big(&c, "10"), &c).unwrap();
        let q = Float::with_val(160, -c.pi() * 20u32).exp();
        assert!(rel_err(d.as_float(), &q) < 1e-20);
    }

    #[test]
    fn delta_involution() {
        let c = ctx();
        let small = delta_at(&big(&c, "0.25"), &c).unwrap();
        let large = delta_at(&big(&c, "4"), &c).unwrap();
        let expect = large.into_float() * Float::with_val(160, 4u32).pow(12u32);
        assert!(rel_err(small.as_float(), &expect) < c.pow2(-125));
        let one = delta_at(&big(&c, "1"), &c).unwrap();
        assert!(rel_err(one.as_float(), &delta_direct(&c.one(), &c).unwrap().0) < c.pow2(-125));
    }

    #[test]
    fn delta_cross_method() {
        let c = ctx();
        for s in ["0.8", "0.3", "1.7"] {
            let u = big(&c, s);
            let a = alpha_from_u(&u, &c).unwrap();
            let lhs = delta_at(&u, &c).unwrap();
            let rhs = delta_from_alpha(&a, &c).unwrap();
            assert!(rel_err(lhs.as_float(), rhs.as_float()) < c.pow2(-120), "u = {s}");
        }
    }

    #[test]
    fn eisenstein_one_term() {
        let c = ctx();
        let e = eisenstein_at(6, 1, &big(&c, "10"), &c, EisensteinRoute::Direct).unwrap();
        let q = Float::with_val(160, -c.pi() * 20u32).exp();
        let approx = Float::with_val(160, 1u32 - q * 504u32);
        assert!(rel_err(e.as_float(), &approx) < 1e-40);
    }

    #[test]
    fn eisenstein_ramanujan_identity() {
        let c = ctx();
        let u = big(&c, "0.9");
        let e4 = eisenstein_at(4, 1, &u, &c, EisensteinRoute::Direct).unwrap();
        let e6 = eisenstein_at(6, 1, &u, &c, EisensteinRoute::Direct).unwrap();
        let lhs = e4.as_float().clone().pow(3u32) - e6.as_float().clone().square();
        let rhs = delta_at(&u, &c).unwrap().into_float() * 1728u32;
        assert!(rel_err(&lhs, &rhs) < c.pow2(-110));
    }

    #[test]
    fn eisenstein_guard() {
        let c = ctx();
        let err = eisenstein_at(4, 1, &big(&c, "0.01"), &c, EisensteinRoute::Direct).unwrap_err();
        assert!(matches!(err, Error::SlowConvergence(_)));
        assert!(eisenstein_at(4, 4, &big(&c, "0.02"), &c, EisensteinRoute::Direct).is_ok());
        assert!(eisenstein_at(4, 3, &big(&c, "1"), &c, EisensteinRoute::Direct).is_err());
        assert!(eisenstein_at(5, 1, &big(&c, "1"), &c, EisensteinRoute::Direct).is_err());
    }

    #[test]
    fn lambert_leading_term() {
        let c = ctx();
        let v = lambert_weight11(&big(&c, "5"), &c).unwrap();
        let q = Float::with_val(160, -c.pi() * 10u32).exp();
        let lead = Float::with_val(160, &q / Float::with_val(160, 1u32 - q.clone().square()));
        assert!(rel_err(v.as_float(), &lead) < 1e-9);
    }

    #[test]
    fn combination_specs() {
        let p8 = CombinationSpec::p(8).unwrap();
        assert_eq!(p8.terms[1].1, -258);
        assert_eq!(p8.terms[2].1, 512);
        let s2 = CombinationSpec::s(2).unwrap();
        assert_eq!(s2.terms[1].1, -3);
        assert_eq!(s2.terms[2].1, 2);
        assert!(CombinationSpec::new("bad", 4, vec![(3, Rational::from(1))]).is_err());
        assert!(CombinationSpec::p(7).is_err());
    }
}

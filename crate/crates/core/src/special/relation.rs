//! Discovery of exact relations `Σ c_j E_k(j·iu) = p(α) F(α)^k` with `p`
//! a polynomial with rational coefficients.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::hyper::f_unit;
use super::modular::{combination_raw, u_at, CombinationSpec};
use super::theta::alpha_unit_from_u;
use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecCtx, UnitPoint};

/// Sampling interval for α; keeps every `j·u` above the direct-summation cutoff.
pub const SAMPLE_RANGE: (f64, f64) = (0.04, 0.85);
pub const HOLDOUT_COUNT: usize = 12;

/// Extra bits used for the linear solve.
const SOLVE_EXTRA_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaPolynomial {
    pub weight: u32,
    /// Coefficients of `1, α, α^2, ...`; trailing zeros trimmed.
    pub coeffs: Vec<Rational>,
}

impl AlphaPolynomial {
    pub fn new(weight: u32, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        AlphaPolynomial { weight, coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, alpha: &Float) -> Float {
        let bits = alpha.prec();
        let mut acc = Float::new(bits);
        for c in self.coeffs.iter().rev() {
            acc *= alpha;
            acc += Float::with_val(bits, c);
        }
        acc
    }

    pub fn eval_rational(&self, alpha: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= alpha;
            acc += c;
        }
        acc
    }

    /// `p(α) F(α)^k` at a point of `(0,1)`.
    pub(crate) fn eval_form(&self, p: &UnitPoint, ctx: &PrecCtx) -> Float {
        let f = f_unit(p, ctx);
        self.eval(&p.x) * f.pow(self.weight)
    }

    /// Product with `(Σ a_i α^i)` given by rational coefficients.
    pub fn times(&self, other: &[Rational]) -> AlphaPolynomial {
        if self.coeffs.is_empty() || other.is_empty() {
            return AlphaPolynomial::new(self.weight, Vec::new());
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        AlphaPolynomial::new(self.weight, out)
    }
}

impl fmt::Display for AlphaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.cmp0().is_eq() {
                continue;
            }
            let neg = c.cmp0().is_lt();
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*a")?,
                _ => write!(f, "{mag}*a^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum RelationSearch {
    Found {
        poly: AlphaPolynomial,
        /// Largest holdout residual relative to `Σ |c_j E_k(j·iu)|`.
        max_residual: f64,
        samples: usize,
        holdouts: usize,
    },
    NoRelation {
        reason: String,
    },
}

impl RelationSearch {
    pub fn polynomial(&self) -> Option<&AlphaPolynomial> {
        match self {
            RelationSearch::Found { poly, .. } => Some(poly),
            RelationSearch::NoRelation { .. } => None,
        }
    }
}

fn chebyshev_alphas(n: usize, bits: u32) -> Vec<Float> {
    let (lo, hi) = SAMPLE_RANGE;
    let mid = (lo + hi) / 2.0;
    let half = (hi - lo) / 2.0;
    (0..n)
        .map(|i| {
            let theta = Float::with_val(bits, rug::float::Constant::Pi) * (2 * i + 1) as u32 / (2 * n) as u32;
            theta.cos() * half + mid
        })
        .collect()
}

fn holdout_alphas(bits: u32) -> Vec<Float> {
    (0..HOLDOUT_COUNT)
        .map(|i| Float::with_val(bits, 0.05 + 0.08 * i as f64 + 0.0123))
        .collect()
}

/// `Σ c_j E_k(j·iu) / F(α)^k` at a sample α, and the same for `Σ |c_j E_k|`.
fn sample(spec: &CombinationSpec, alpha: &Float, ctx: &PrecCtx) -> Result<(Float, Float)> {
    let p = UnitPoint::new(alpha.clone())?;
    let u = u_at(&p, ctx);
    let fk = f_unit(&p, ctx).pow(spec.weight);
    let (v, scale) = combination_raw(spec, &u, ctx)?;
    Ok((v / &fk, scale / fk))
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve(mut a: Vec<Vec<Float>>, mut b: Vec<Float>) -> Option<Vec<Float>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            let ai = Float::with_val(a[i][col].prec(), a[i][col].abs_ref());
            let aj = Float::with_val(a[j][col].prec(), a[j][col].abs_ref());
            ai.partial_cmp(&aj).unwrap()
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = Float::with_val(a[row][col].prec(), &a[row][col] / &a[col][col]);
            for c in col..n {
                let t = Float::with_val(factor.prec(), &factor * &a[col][c]);
                a[row][c] -= t;
            }
            let t = Float::with_val(factor.prec(), &factor * &b[col]);
            b[row] -= t;
        }
    }
    let mut x: Vec<Float> = Vec::with_capacity(n);
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for (k, xk) in x.iter().rev().enumerate() {
            let c = row + 1 + k;
            acc -= Float::with_val(acc.prec(), &a[row][c] * xk);
        }
        x.push(acc / &a[row][row]);
    }
    x.reverse();
    Some(x)
}

/// Continued-fraction reconstruction of `x` with denominator at most `max_den`.
pub(crate) fn reconstruct(x: &Float, max_den: &Integer, tol: &Float) -> Option<Rational> {
    let bits = x.prec();
    let abs = Float::with_val(bits, x.abs_ref());
    let mag = if abs > 1 { abs.clone() } else { Float::with_val(bits, 1) };
    let allowed = Float::with_val(bits, tol * &mag);
    if abs <= allowed {
        return Some(Rational::new());
    }
    let (mut h1, mut h2) = (Integer::from(1), Integer::new());
    let (mut k1, mut k2) = (Integer::new(), Integer::from(1));
    let mut y = x.clone();
    for _ in 0..400 {
        let a = y.clone().floor().to_integer()?;
        let h = Integer::from(&a * &h1) + &h2;
        let k = Integer::from(&a * &k1) + &k2;
        if k > *max_den {
            return None;
        }
        let cand = Rational::from((h.clone(), k.clone()));
        let diff = Float::with_val(bits, x - &cand).abs();
        if diff <= allowed {
            return Some(cand);
        }
        let frac = Float::with_val(bits, &y - &a);
        if frac.is_zero() {
            return Some(cand);
        }
        y = frac.recip();
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
    }
    None
}

/// Fits `Σ c_j E_k(j·iu) / F(α)^k` by a polynomial of degree at most
/// `degree_bound >= k` in α and recognises its coefficients as rationals. The
/// relation is accepted only if it holds at every holdout point to within
/// `2^{16 - target}` relative to `Σ |c_j E_k(j·iu)|`.
pub fn find_alpha_polynomial(spec: &CombinationSpec, degree_bound: usize, ctx: &PrecCtx) -> Result<RelationSearch> {
    if degree_bound < spec.weight as usize {
        return Err(Error::Domain(format!(
            "degree bound {degree_bound} is below the weight {} of {}",
            spec.weight, spec.name
        )));
    }
    if degree_bound > 64 {
        return Err(Error::Domain(format!("degree bound {degree_bound} is larger than 64")));
    }
    let wctx = ctx.widened(SOLVE_EXTRA_BITS);
    let bits = wctx.working_bits();
    let n = degree_bound + 1;
    let alphas = chebyshev_alphas(n, bits);
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for a in &alphas {
        let (v, _) = sample(spec, a, &wctx)?;
        let mut row = Vec::with_capacity(n);
        let mut pw = wctx.one();
        for _ in 0..n {
            row.push(pw.clone());
            pw *= a;
        }
        rows.push(row);
        rhs.push(v);
    }
    let Some(raw) = solve(rows, rhs) else {
        return Err(Error::Discovery("sample matrix is singular".into()));
    };

    let target = ctx.target_bits();
    let max_den = Integer::from(1) << (target / 3).max(8);
    let tol = wctx.pow2(-((2 * target / 3) as i32));
    let mut coeffs = Vec::with_capacity(n);
    for (i, c) in raw.iter().enumerate() {
        match reconstruct(c, &max_den, &tol) {
            Some(r) => coeffs.push(r),
            None => {
                return Ok(RelationSearch::NoRelation {
                    reason: format!(
                        "coefficient of a^{i} ({}) has no rational form with denominator below 2^{}",
                        c.to_f64(),
                        (target / 3).max(8)
                    ),
                })
            }
        }
    }
    let poly = AlphaPolynomial::new(spec.weight, coeffs);

    let threshold = ctx.pow2(16 - target as i32);
    let mut worst = Float::with_val(bits, 0);
    let holdouts = holdout_alphas(bits);
    for a in &holdouts {
        let (v, scale) = sample(spec, a, &wctx)?;
        let res = Float::with_val(bits, poly.eval(a) - &v).abs() / scale;
        if res > worst {
            worst = res;
        }
    }
    if worst > threshold {
        return Ok(RelationSearch::NoRelation {
            reason: format!(
                "holdout residual {:.3e} exceeds 2^{}",
                worst.to_f64(),
                16 - target as i32
            ),
        });
    }
    Ok(RelationSearch::Found {
        poly,
        max_residual: worst.to_f64(),
        samples: n,
        holdouts: holdouts.len(),
    })
}

type CacheKey = (CombinationSpec, usize, u32);

fn cache() -> &'static Mutex<HashMap<CacheKey, AlphaPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, AlphaPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoised `find_alpha_polynomial` with degree bound `k`; an absent relation is an error.
pub fn discovered_polynomial(spec: &CombinationSpec, ctx: &PrecCtx) -> Result<AlphaPolynomial> {
    let degree = spec.weight as usize;
    let key = (spec.clone(), degree, ctx.target_bits());
    if let Some(p) = cache().lock().unwrap().get(&key) {
        return Ok(p.clone());
    }
    match find_alpha_polynomial(spec, degree, ctx)? {
        RelationSearch::Found { poly, .. } => {
            cache().lock().unwrap().insert(key, poly.clone());
            Ok(poly)
        }
        RelationSearch::NoRelation { reason } => {
            Err(Error::Discovery(format!("{}: {reason}", spec.name)))
        }
    }
}

pub(crate) fn combination_via_alpha(spec: &CombinationSpec, u: &BigReal, ctx: &PrecCtx) -> Result<BigReal> {
    let poly = discovered_polynomial(spec, ctx)?;
    let p = alpha_unit_from_u(u.as_float(), ctx)?;
    Ok(BigReal::from_float(ctx, poly.eval_form(&p, ctx)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn poly_of(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&x| Rational::from(x)).collect()
    }

    fn found(spec: &CombinationSpec, degree: usize) -> AlphaPolynomial {
        let ctx = PrecCtx::new(128);
        match find_alpha_polynomial(spec, degree, &ctx).unwrap() {
            RelationSearch::Found { poly, .. } => poly,
            RelationSearch::NoRelation { reason } => panic!("{}: {reason}", spec.name),
        }
    }

    #[test]
    fn e4_forms() {
        let e4 = found(&CombinationSpec::single(4, 1).unwrap(), 4);
        assert_eq!(e4.coeffs, poly_of(&[1, 14, 1]));
        let e4_2 = found(&CombinationSpec::single(4, 2).unwrap(), 4);
        assert_eq!(e4_2.coeffs, poly_of(&[1, -1, 1]));
        let e4_4 = found(&CombinationSpec::single(4, 4).unwrap(), 4);
        assert_eq!(e4_4.coeffs, vec![r(1, 1), r(-1, 1), r(1, 16)]);
    }

    #[test]
    fn extra_degree_is_zero() {
        let e4 = found(&CombinationSpec::single(4, 1).unwrap(), 5);
        assert_eq!(e4.degree(), Some(2));
    }

    #[test]
    fn weight_two_needs_a_modular_combination() {
        let s2 = found(&CombinationSpec::s(2).unwrap(), 2);
        assert_eq!(s2.coeffs, vec![Rational::new(), r(-3, 2)]);
        let ctx = PrecCtx::new(128);
        let e2 = find_alpha_polynomial(&CombinationSpec::single(2, 1).unwrap(), 3, &ctx).unwrap();
        assert!(matches!(e2, RelationSearch::NoRelation { .. }));
    }

    #[test]
    fn degree_bound_below_weight_is_rejected() {
        let ctx = PrecCtx::new(64);
        let e4 = CombinationSpec::single(4, 1).unwrap();
        assert!(matches!(find_alpha_polynomial(&e4, 3, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn continued_fraction() {
        let x = Float::with_val(200, -33) / 2u32;
        let tol = Float::with_val(200, 1e-30);
        assert_eq!(reconstruct(&x, &Integer::from(1000), &tol), Some(r(-33, 2)));
        let pi = Float::with_val(200, rug::float::Constant::Pi);
        assert_eq!(reconstruct(&pi, &Integer::from(1 << 20), &tol), None);
    }

    #[test]
    fn display_and_times() {
        let p = AlphaPolynomial::new(8, poly_of(&[1, 0, -1]));
        assert_eq!(p.to_string(), "1 - 1*a^2");
        let q = p.times(&poly_of(&[17, -32, 17]));
        assert_eq!(q.coeffs, poly_of(&[17, -32, 0, 32, -17]));
        assert_eq!(AlphaPolynomial::new(4, vec![Rational::new()]).to_string(), "0");
    }
}

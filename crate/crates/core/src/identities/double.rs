//! Double integrals over the triangle `0 < β < α < 1` for `L(Δ, k)`, `k >= 12`.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::lvalues::{odd_part_factor, EvalOptions, LValue, Method};
use crate::error::{Error, Result};
use crate::precision::{PrecCtx, UnitPoint};
use crate::qexpansion::zeta_negative;
use crate::quadrature::{integrate_triangle_prepared, QuadResult};
use crate::special::hyper::f_unit;
use crate::special::relation::{discovered_polynomial, AlphaPolynomial};
use crate::special::CombinationSpec;

/// Largest `k` accepted by [`theorem_double`].
pub const MAX_THEOREM_K: i64 = 20;

/// The constants `q13, q14, q15` of the closed double integrals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryConstants {
    pub q13: Rational,
    pub q14: Rational,
    pub q15: Rational,
}

impl Default for CorollaryConstants {
    fn default() -> Self {
        CorollaryConstants {
            q13: Rational::from(122_987_403_000u64),
            q14: Rational::from(798_232_309_875u64),
            q15: Rational::from((67_002_093_132_975u64, 4u32)),
        }
    }
}

impl CorollaryConstants {
    pub fn get(&self, k: i64) -> Option<&Rational> {
        match k {
            13 => Some(&self.q13),
            14 => Some(&self.q14),
            15 => Some(&self.q15),
            _ => None,
        }
    }
}

/// `p(x) / (x^a (1-x)^c)` with common factors of the numerator cancelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduced {
    pub poly: Vec<Rational>,
    pub a: u32,
    pub c: u32,
}

impl Reduced {
    pub fn new(mut poly: Vec<Rational>, mut a: u32, mut c: u32) -> Self {
        while poly.last().is_some_and(|x| x.cmp0().is_eq()) {
            poly.pop();
        }
        while a > 0 && poly.first().is_some_and(|x| x.cmp0().is_eq()) {
            poly.remove(0);
            a -= 1;
        }
        while c > 0 && poly.len() > 1 && poly.iter().fold(Rational::new(), |s, x| s + x).cmp0().is_eq() {
            // p = (x - 1) s(x), so p / (1 - x) = -s(x)
            let n = poly.len() - 1;
            let mut s = vec![Rational::new(); n];
            let mut carry = Rational::new();
            for i in (1..=n).rev() {
                carry += &poly[i];
                s[i - 1] = -carry.clone();
            }
            poly = s;
            c -= 1;
        }
        Reduced { poly, a, c }
    }

    pub fn from_ints(coeffs: &[i64], a: u32, c: u32) -> Self {
        Reduced::new(coeffs.iter().map(|&x| Rational::from(x)).collect(), a, c)
    }

    /// Product of two polynomials in the same variable.
    pub fn product(coeffs: &[&[i64]]) -> Vec<Rational> {
        let mut out = vec![Rational::from(1)];
        for f in coeffs {
            let mut next = vec![Rational::new(); out.len() + f.len() - 1];
            for (i, x) in out.iter().enumerate() {
                for (j, &y) in f.iter().enumerate() {
                    next[i + j] += Rational::from(x * y);
                }
            }
            out = next;
        }
        out
    }

    pub fn eval(&self, p: &UnitPoint) -> Float {
        let bits = p.x.prec();
        let mut acc = Float::new(bits);
        for c in self.poly.iter().rev() {
            acc *= &p.x;
            acc += Float::with_val(bits, c);
        }
        if self.a > 0 {
            acc /= Float::with_val(bits, p.x.clone().pow(self.a));
        }
        if self.c > 0 {
            acc /= Float::with_val(bits, p.comp.clone().pow(self.c));
        }
        acc
    }

    /// `Some(λ)` when `self = λ·other`.
    pub fn ratio_to(&self, other: &Reduced) -> Option<Rational> {
        if self.a != other.a || self.c != other.c || self.poly.len() != other.poly.len() {
            return None;
        }
        let (i, lead) = other.poly.iter().enumerate().find(|(_, x)| x.cmp0().is_ne())?;
        let lambda = Rational::from(&self.poly[i] / lead);
        self.poly
            .iter()
            .zip(&other.poly)
            .all(|(x, y)| *x == Rational::from(y * &lambda))
            .then_some(lambda)
    }
}

/// `∫_0^1 ∫_0^α bracket^power · outer(α) · inner(β) · G dβ dα` where
/// `bracket = F(α)F(1-β) - F(β)F(1-α)` and `G = [F(α)F(1-α)]^5` (even) or
/// `[F(α)F(β)]^5` (odd).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleKernel {
    pub power: u32,
    pub outer: Reduced,
    pub inner: Reduced,
    pub even: bool,
}

struct OuterState {
    fa: Float,
    fc: Float,
    weight: Float,
}

impl DoubleKernel {
    pub fn integrate(&self, ctx: &PrecCtx, max_level: u32) -> Result<QuadResult> {
        let bits = ctx.working_bits();
        integrate_triangle_prepared(
            |outer| {
                let p = UnitPoint::from_pair(outer.from_a.clone(), outer.to_b.clone())?;
                let fa = f_unit(&p, ctx);
                let fc = f_unit(&p.flipped(), ctx);
                let g = if self.even {
                    Float::with_val(bits, &fa * &fc).pow(5u32)
                } else {
                    Float::with_val(bits, (&fa).pow(5u32))
                };
                Ok(OuterState {
                    weight: g * self.outer.eval(&p),
                    fa,
                    fc,
                })
            },
            |s, outer, inner| {
                let comp = Float::with_val(bits, &outer.to_b + &inner.to_b);
                let p = UnitPoint::from_pair(inner.from_a.clone(), comp)?;
                let fb = f_unit(&p, ctx);
                let fbc = f_unit(&p.flipped(), ctx);
                let bracket = Float::with_val(bits, &s.fa * &fbc) - Float::with_val(bits, &fb * &s.fc);
                let mut v = Float::with_val(bits, &s.weight * self.inner.eval(&p));
                if self.power > 0 {
                    v *= bracket.pow(self.power);
                }
                if !self.even {
                    v *= fb.pow(5u32);
                }
                Ok(v)
            },
            ctx,
            max_level,
        )
    }
}

/// Precision for the nested quadrature: 16 bits beyond the tolerance, never
/// more than the caller's target.
pub fn reduced_context(ctx: &PrecCtx, tol: f64) -> PrecCtx {
    let want = if tol > 0.0 && tol.is_finite() {
        (-tol.log2()).ceil().max(0.0) as u32 + 16
    } else {
        ctx.target_bits()
    };
    PrecCtx::with_guard(want.min(ctx.target_bits()).max(32), ctx.guard_bits()).unwrap_or(*ctx)
}

/// Kernel of the closed double integral for `k ∈ {13, 14, 15}`.
pub fn corollary_kernel(k: i64) -> Result<DoubleKernel> {
    let kernel = match k {
        13 => DoubleKernel {
            power: 1,
            outer: Reduced::new(Reduced::product(&[&[1, 1], &[17, -32, 17]]), 1, 0),
            inner: Reduced::from_ints(&[2, 13, 2], 0, 1),
            even: false,
        },
        14 => DoubleKernel {
            power: 2,
            outer: Reduced::new(Reduced::product(&[&[2, -1], &[5461, -10922, 5973, -512, 1]]), 1, 0),
            inner: Reduced::from_ints(&[2, -1], 0, 1),
            even: true,
        },
        15 => DoubleKernel {
            power: 3,
            outer: Reduced::from_ints(&[31, -47, 33, -47, 31], 1, 0),
            inner: Reduced::new(Reduced::product(&[&[1, 1], &[1, 29, 1]]), 0, 1),
            even: false,
        },
        _ => {
            return Err(Error::Domain(format!("the closed double integrals cover k = 13, 14, 15; got {k}")))
        }
    };
    Ok(kernel)
}

fn check_positive(l: LValue) -> Result<LValue> {
    if l.converged && l.value() <= &0 {
        return Err(Error::Evaluation {
            node: format!("k = {}", l.k),
            reason: format!("{} produced a non-positive value", l.method),
        });
    }
    Ok(l)
}

/// `L(Δ, k) = π^{2k-13}/q_k · ∫∫ ...` for `k ∈ {13, 14, 15}`, at the reduced
/// precision implied by `opts.tolerance_2d`.
pub fn corollary_l(k: i64, ctx: &PrecCtx, opts: &EvalOptions) -> Result<LValue> {
    let kernel = corollary_kernel(k)?;
    let consts = CorollaryConstants::default();
    let qk = consts.get(k).expect("k checked by corollary_kernel");
    let rctx = reduced_context(ctx, opts.tolerance_2d);
    let q = kernel.integrate(&rctx, opts.max_level_2d)?;
    let scale = rctx.pi().pow(2 * k as u32 - 13) / rctx.rational(qk);
    check_positive(LValue::from_quad(k, Method::Corollary, q, &scale, &rctx))
}

/// Exact rational factor `c_k` of `L(Δ, k) = c_k π^{2k-13} ∫∫ ...` for the
/// general double integral, with the powers of `i` resolved to signs.
pub fn theorem_constant(k: i64) -> Result<Rational> {
    if !(12..=MAX_THEOREM_K).contains(&k) {
        return Err(Error::Domain(format!("the double integral covers 12 <= k <= {MAX_THEOREM_K}, got {k}")));
    }
    let fact = |n: i64| Rational::from(Integer::from(Integer::factorial(n as u32)));
    let denom = fact(k - 1) * fact(k - 12) * odd_part_factor(k);
    let num = if k % 2 == 1 {
        // i^{k-1} = (-1)^{(k-1)/2}
        let z = zeta_negative(6 - k)?;
        let sign = if ((k - 1) / 2) % 2 == 0 { 1 } else { -1 };
        Rational::from(&z * &z) * sign
    } else {
        // -i^k = -(-1)^{k/2}
        let sign = if (k / 2) % 2 == 0 { -1 } else { 1 };
        zeta_negative(1 - k)? * zeta_negative(11 - k)? * 2u32 * sign
    };
    Ok(num / denom)
}

/// The weight-`k - 5` forms `P, Q` (odd `k`) or `R_k, S_{k-10}` (even `k`).
pub fn theorem_specs(k: i64) -> Result<(CombinationSpec, CombinationSpec)> {
    let k32 = k as u32;
    if k % 2 == 1 {
        Ok((CombinationSpec::p(k32 - 5)?, CombinationSpec::q(k32 - 5)?))
    } else {
        Ok((CombinationSpec::r(k32)?, CombinationSpec::s(k32 - 10)?))
    }
}

/// The α-polynomials of the four forms whose explicit shape is known.
pub fn reference_polynomial(name: &str) -> Option<AlphaPolynomial> {
    let r = |n: i64, d: i64| Rational::from((n, d));
    let ints = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
    let p = match name {
        "P8" => AlphaPolynomial::new(8, ints(&[1, 0, -1])).times(&ints(&[255, -480, 255])),
        "Q8" => AlphaPolynomial::new(8, ints(&[0, 15])).times(&ints(&[2, 13, 2])),
        "P10" => AlphaPolynomial::new(10, ints(&[33, -33])).times(&ints(&[31, -47, 33, -47, 31])),
        "Q10" => AlphaPolynomial::new(10, vec![Rational::new(), r(-33, 2)])
            .times(&ints(&[1, 1]))
            .times(&ints(&[1, 29, 1])),
        _ => return None,
    };
    Some(p)
}

/// Discovery is run at no less than 128 bits so that rational reconstruction is unambiguous.
fn discovery_context(ctx: &PrecCtx) -> PrecCtx {
    if ctx.target_bits() >= 128 {
        *ctx
    } else {
        PrecCtx::new(128)
    }
}

/// Builds the general kernel from discovered polynomials.
pub fn theorem_kernel(k: i64, ctx: &PrecCtx) -> Result<DoubleKernel> {
    theorem_constant(k)?;
    let dctx = discovery_context(ctx);
    let (outer_spec, inner_spec) = theorem_specs(k)?;
    let outer = discovered_polynomial(&outer_spec, &dctx)?;
    let inner = discovered_polynomial(&inner_spec, &dctx)?;
    for (spec, poly) in [(&outer_spec, &outer), (&inner_spec, &inner)] {
        if let Some(reference) = reference_polynomial(&spec.name) {
            if reference != *poly {
                return Err(Error::Discovery(format!(
                    "{} came out as {poly}, expected {reference}",
                    spec.name
                )));
            }
        }
    }
    Ok(DoubleKernel {
        power: (k - 12) as u32,
        outer: Reduced::new(outer.coeffs, 1, 1),
        inner: Reduced::new(inner.coeffs, 1, 1),
        even: k % 2 == 0,
    })
}

/// `L(Δ, k)` for `12 <= k <= 20` from the general double integral.
pub fn theorem_double(k: i64, ctx: &PrecCtx, opts: &EvalOptions) -> Result<LValue> {
    let constant = theorem_constant(k)?;
    let kernel = theorem_kernel(k, ctx)?;
    let rctx = reduced_context(ctx, opts.tolerance_2d);
    let q = kernel.integrate(&rctx, opts.max_level_2d)?;
    let scale = rctx.pi().pow(2 * k as u32 - 13) * rctx.rational(&constant);
    check_positive(LValue::from_quad(k, Method::Theorem31, q, &scale, &rctx))
}

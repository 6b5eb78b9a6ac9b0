//! Precision contexts and the arbitrary-precision real type.
//!
//! Every evaluation runs at `target_bits + guard_bits` of working precision.
//! A [`BigReal`] remembers that working precision, and arithmetic between
//! values produced under different contexts is refused.

use std::fmt;

use rug::float::Constant;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Smallest permitted number of guard bits.
pub const MIN_GUARD_BITS: u32 = 32;

/// Smallest permitted target precision.
pub const MIN_TARGET_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecCtx {
    target_bits: u32,
    guard_bits: u32,
    tail_bits: u32,
}

impl PrecCtx {
    /// Context with the default 32 guard bits. Series tails are truncated
    /// below `2^-(target + guard)` relative to the partial sum.
    pub fn new(target_bits: u32) -> Self {
        let target_bits = target_bits.max(MIN_TARGET_BITS);
        PrecCtx {
            target_bits,
            guard_bits: MIN_GUARD_BITS,
            tail_bits: target_bits + MIN_GUARD_BITS,
        }
    }

    pub fn with_guard(target_bits: u32, guard_bits: u32) -> Result<Self> {
        if guard_bits < MIN_GUARD_BITS {
            return Err(Error::Domain(format!(
                "guard_bits must be at least {MIN_GUARD_BITS}, got {guard_bits}"
            )));
        }
        if target_bits < MIN_TARGET_BITS {
            return Err(Error::Domain(format!(
                "target_bits must be at least {MIN_TARGET_BITS}, got {target_bits}"
            )));
        }
        Ok(PrecCtx {
            target_bits,
            guard_bits,
            tail_bits: target_bits + guard_bits,
        })
    }

    pub fn target_bits(&self) -> u32 {
        self.target_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    pub fn working_bits(&self) -> u32 {
        self.target_bits + self.guard_bits
    }

    /// Exponent `t` of the series tail bound `2^-t`.
    pub fn tail_bits(&self) -> u32 {
        self.tail_bits
    }

    pub fn series_tail_eps(&self) -> Float {
        self.pow2(-(self.tail_bits as i32))
    }

    /// The same context with twice the target precision.
    pub fn doubled(&self) -> Self {
        PrecCtx {
            target_bits: self.target_bits * 2,
            guard_bits: self.guard_bits,
            tail_bits: self.target_bits * 2 + self.guard_bits,
        }
    }

    /// A context with `extra` more target bits, used for internal linear algebra.
    pub fn widened(&self, extra: u32) -> Self {
        PrecCtx {
            target_bits: self.target_bits + extra,
            guard_bits: self.guard_bits,
            tail_bits: self.tail_bits + extra,
        }
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        let mut f = Float::new(self.working_bits());
        rug::Assign::assign(&mut f, value);
        f
    }

    pub fn zero(&self) -> Float {
        Float::new(self.working_bits())
    }

    pub fn one(&self) -> Float {
        self.float(1)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.working_bits(), Constant::Pi)
    }

    pub fn rational(&self, r: &Rational) -> Float {
        Float::with_val(self.working_bits(), r)
    }

    pub fn pow2(&self, exp: i32) -> Float {
        let mut f = self.one();
        f <<= exp;
        f
    }

    /// Relative accuracy the caller asked for, `2^-target_bits`.
    pub fn target_eps(&self) -> Float {
        self.pow2(-(self.target_bits as i32))
    }
}

impl Default for PrecCtx {
    fn default() -> Self {
        PrecCtx::new(128)
    }
}

/// Arbitrary-precision real tagged with the working precision of its context.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal {
    value: Float,
}

impl BigReal {
    pub fn new<T>(ctx: &PrecCtx, value: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigReal {
            value: ctx.float(value),
        }
    }

    pub fn from_rational(ctx: &PrecCtx, r: &Rational) -> Self {
        BigReal {
            value: ctx.rational(r),
        }
    }

    /// Parses a decimal string such as `"0.3"` or `"1.5e-3"` at the context precision.
    pub fn parse(ctx: &PrecCtx, s: &str) -> Result<Self> {
        let parsed = Float::parse(s).map_err(|e| Error::Domain(format!("bad number {s:?}: {e}")))?;
        Ok(BigReal {
            value: Float::with_val(ctx.working_bits(), parsed),
        })
    }

    /// Wraps a float computed at the working precision of `ctx`.
    pub(crate) fn from_float(ctx: &PrecCtx, value: Float) -> Self {
        debug_assert_eq!(value.prec(), ctx.working_bits());
        BigReal { value }
    }

    pub fn bits(&self) -> u32 {
        self.value.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.value
    }

    pub fn into_float(self) -> Float {
        self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Rejects a value that was not produced under `ctx`.
    pub fn check(&self, ctx: &PrecCtx) -> Result<()> {
        if self.bits() != ctx.working_bits() {
            return Err(Error::ContextMismatch {
                left: self.bits(),
                right: ctx.working_bits(),
            });
        }
        Ok(())
    }

    fn same_ctx(&self, other: &BigReal) -> Result<u32> {
        if self.bits() != other.bits() {
            return Err(Error::ContextMismatch {
                left: self.bits(),
                right: other.bits(),
            });
        }
        Ok(self.bits())
    }

    pub fn try_add(&self, other: &BigReal) -> Result<BigReal> {
        let p = self.same_ctx(other)?;
        Ok(BigReal {
            value: Float::with_val(p, &self.value + &other.value),
        })
    }

    pub fn try_sub(&self, other: &BigReal) -> Result<BigReal> {
        let p = self.same_ctx(other)?;
        Ok(BigReal {
            value: Float::with_val(p, &self.value - &other.value),
        })
    }

    pub fn try_mul(&self, other: &BigReal) -> Result<BigReal> {
        let p = self.same_ctx(other)?;
        Ok(BigReal {
            value: Float::with_val(p, &self.value * &other.value),
        })
    }

    pub fn try_div(&self, other: &BigReal) -> Result<BigReal> {
        let p = self.same_ctx(other)?;
        if other.value.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(BigReal {
            value: Float::with_val(p, &self.value / &other.value),
        })
    }

    pub fn abs(&self) -> BigReal {
        BigReal {
            value: self.value.clone().abs(),
        }
    }

    /// Decimal representation with enough digits to round-trip the precision.
    pub fn to_decimal_string(&self) -> String {
        decimal_string(&self.value)
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", self.to_decimal_string(), self.bits())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

/// Number of significant decimal digits that round-trip `bits` binary digits.
pub fn roundtrip_digits(bits: u32) -> usize {
    (f64::from(bits) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

pub fn decimal_string(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(roundtrip_digits(x.prec())))
}

/// A point of the open unit interval stored together with its complement,
/// so that both `x` and `1 - x` keep full relative precision near the ends.
#[derive(Debug, Clone)]
pub struct UnitPoint {
    pub x: Float,
    pub comp: Float,
}

impl UnitPoint {
    pub fn new(x: Float) -> Result<Self> {
        if !(x.is_finite() && x > 0 && x < 1) {
            return Err(Error::Domain(format!(
                "expected a value in (0,1), got {}",
                decimal_string(&x)
            )));
        }
        let comp = Float::with_val(x.prec(), 1 - &x);
        Ok(UnitPoint { x, comp })
    }

    /// Builds the point from both coordinates; the caller guarantees `x + comp = 1`.
    pub fn from_pair(x: Float, comp: Float) -> Result<Self> {
        if !(x.is_finite() && comp.is_finite() && x > 0 && comp > 0) {
            return Err(Error::Domain(format!(
                "expected a value in (0,1), got ({}, {})",
                decimal_string(&x),
                decimal_string(&comp)
            )));
        }
        Ok(UnitPoint { x, comp })
    }

    pub fn flipped(&self) -> UnitPoint {
        UnitPoint {
            x: self.comp.clone(),
            comp: self.x.clone(),
        }
    }
}

/// `|a - b| / |b|`, or `|a - b|` when `b` is zero.
pub fn rel_err(a: &Float, b: &Float) -> Float {
    let diff = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if b.is_zero() {
        diff
    } else {
        diff / b.clone().abs()
    }
}

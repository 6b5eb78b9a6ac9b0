//! Bernoulli numbers and the rational values of ζ at non-positive integers.

use std::sync::OnceLock;

use rug::Rational;

use crate::error::{Error, Result};

const CACHED: usize = 64;

/// Akiyama–Tanigawa recurrence. Produces `B_0..=B_n` with `B_1 = +1/2`.
fn akiyama_tanigawa(n: usize) -> Vec<Rational> {
    let mut row: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(Rational::from((1, m as u64 + 1)));
        for j in (1..=m).rev() {
            let diff = Rational::from(&row[j - 1] - &row[j]);
            row[j - 1] = diff * Rational::from(j as u64);
        }
        out.push(row[0].clone());
    }
    out
}

fn table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| akiyama_tanigawa(CACHED))
}

/// `B_n` in the convention where `B_1 = +1/2`; only the sign of `B_1` is affected.
pub fn bernoulli(n: usize) -> Rational {
    if n <= CACHED {
        table()[n].clone()
    } else {
        akiyama_tanigawa(n).pop().expect("nonempty")
    }
}

/// Exact `ζ(m)` for integers `m <= 0`: `ζ(0) = -1/2`, `ζ(-2j) = 0`, and
/// `ζ(-n) = -B_{n+1}/(n+1)` for odd `n`.
pub fn zeta_negative(m: i64) -> Result<Rational> {
    if m > 0 {
        return Err(Error::Domain(format!(
            "ζ({m}) is not a known rational; only non-positive arguments are supported"
        )));
    }
    if m == 0 {
        return Ok(Rational::from((-1, 2)));
    }
    let n = (-m) as usize;
    if n % 2 == 0 {
        return Ok(Rational::new());
    }
    Ok(-bernoulli(n + 1) / Rational::from(n as u64 + 1))
}

/// `ζ(1 - k)` for even `k >= 2`.
pub fn zeta_one_minus(k: u32) -> Result<Rational> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Domain(format!("expected an even weight >= 2, got {k}")));
    }
    zeta_negative(1 - i64::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_bernoulli_numbers() {
        assert_eq!(bernoulli(0), r(1, 1));
        assert_eq!(bernoulli(1), r(1, 2));
        assert_eq!(bernoulli(2), r(1, 6));
        assert_eq!(bernoulli(4), r(-1, 30));
        assert_eq!(bernoulli(6), r(1, 42));
        assert_eq!(bernoulli(8), r(-1, 30));
        assert_eq!(bernoulli(12), r(-691, 2730));
        assert_eq!(bernoulli(13), r(0, 1));
        assert_eq!(bernoulli(70), akiyama_tanigawa(70)[70]);
    }

    #[test]
    fn zeta_at_negative_odd_integers() {
        assert_eq!(zeta_negative(-1).unwrap(), r(-1, 12));
        assert_eq!(zeta_negative(-3).unwrap(), r(1, 120));
        assert_eq!(zeta_negative(-5).unwrap(), r(-1, 252));
        assert_eq!(zeta_negative(-7).unwrap(), r(1, 240));
        assert_eq!(zeta_negative(-11).unwrap(), r(691, 32760));
        assert_eq!(zeta_negative(0).unwrap(), r(-1, 2));
        assert_eq!(zeta_negative(-4).unwrap(), r(0, 1));
    }

    #[test]
    fn positive_arguments_are_rejected() {
        assert!(zeta_negative(1).is_err());
        assert!(zeta_negative(2).is_err());
        assert!(zeta_one_minus(5).is_err());
        assert_eq!(zeta_one_minus(6).unwrap(), r(-1, 252));
    }
}

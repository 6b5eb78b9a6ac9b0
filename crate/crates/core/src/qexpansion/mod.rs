//! Exact q-series arithmetic: the τ coefficients, Eisenstein expansions and
//! coefficient-level identity checks. Nothing here uses floating point.

mod bernoulli;
mod eisenstein;
mod series;
mod tau;

pub use bernoulli::{bernoulli, zeta_negative, zeta_one_minus};
pub use eisenstein::{divisor_power_sums, eisenstein_qseries};
pub use series::{QSeries, DEFAULT_MAX_ORDER};
pub use tau::{
    eta24_expand, eta24_expand_with_budget, shared_tau_table, tau_structure_check, TauTable,
};

use rug::Rational;

use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// `Δ(z) + 24 Δ(2z) + 2^11 Δ(4z)` to order `n`.
pub fn delta_odd_part(n: usize) -> Result<QSeries> {
    let delta = eta24_expand(n.max(2))?.truncate(n);
    let d2 = delta.dilate(2)?.scale(&Rational::from(24));
    let d4 = delta.dilate(4)?.scale(&Rational::from(2048));
    Ok(&(&delta + &d2) + &d4)
}

/// Right-hand side of the Eisenstein decomposition of the odd part of Δ:
/// `(8/504^2) [E6(2z) - 64 E6(4z)] [E6(z) - 33 E6(2z) + 32 E6(4z)]`.
pub fn decomposition_rhs(n: usize) -> Result<QSeries> {
    let e6 = eisenstein_qseries(6, n)?;
    let e6_2 = e6.dilate(2)?;
    let e6_4 = e6.dilate(4)?;
    let first = &e6_2 - &e6_4.scale(&Rational::from(64));
    let second = &(&e6 - &e6_2.scale(&Rational::from(33))) + &e6_4.scale(&Rational::from(32));
    Ok((&first * &second).scale(&Rational::from((8, 504 * 504))))
}

fn compare(identity: &str, lhs: &QSeries, rhs: &QSeries) -> VerificationReport {
    let n = lhs.order().min(rhs.order());
    match lhs.first_mismatch(rhs) {
        Some(i) => VerificationReport::exact(
            identity,
            lhs.coeffs()[i].to_string(),
            rhs.coeffs()[i].to_string(),
            n as u64,
            Some(i as u64),
        ),
        None => VerificationReport::exact(
            identity,
            lhs.coeffs()[n - 1].to_string(),
            rhs.coeffs()[n - 1].to_string(),
            n as u64,
            None,
        ),
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("at least one coefficient must be compared".into()));
    }
    Ok(())
}

/// Compares both sides of the Δ/E6 decomposition coefficient by coefficient
/// up to `q^{n-1}`. `lhs`/`rhs` in the report hold the last coefficient
/// compared, or the first mismatching pair.
pub fn verify_decomposition(n: usize) -> Result<VerificationReport> {
    check_order(n)?;
    let lhs = delta_odd_part(n)?;
    let rhs = decomposition_rhs(n)?;
    Ok(compare("lemma21", &lhs, &rhs))
}

/// Checks `1728 Δ = E4^3 - E6^2` to order `n`.
pub fn verify_ramanujan_1728(n: usize) -> Result<VerificationReport> {
    check_order(n)?;
    let lhs = eta24_expand(n.max(2))?
        .truncate(n)
        .scale(&Rational::from(1728));
    let e4 = eisenstein_qseries(4, n)?;
    let e6 = eisenstein_qseries(6, n)?;
    let rhs = &(&(&e4 * &e4) * &e4) - &(&e6 * &e6);
    Ok(compare("ramanujan1728", &lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_first_coefficients() {
        let lhs = delta_odd_part(2).unwrap();
        let rhs = decomposition_rhs(2).unwrap();
        assert_eq!(lhs, QSeries::from_i64s(&[0, 1]));
        assert_eq!(rhs, QSeries::from_i64s(&[0, 1]));
        assert!(verify_decomposition(1).unwrap().passed());
        assert!(verify_decomposition(2).unwrap().passed());
        assert!(verify_decomposition(0).is_err());
    }

    #[test]
    fn decomposition_small_orders() {
        let r = verify_decomposition(120).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.terms, 120);
    }

    #[test]
    fn ramanujan_small_orders() {
        assert!(verify_ramanujan_1728(1).unwrap().passed());
        let r = verify_ramanujan_1728(2).unwrap();
        assert!(r.passed());
        assert_eq!(r.lhs, "1728");
        assert!(verify_ramanujan_1728(100).unwrap().passed());
    }

    #[test]
    fn odd_part_vanishes_at_even_exponents() {
        let n = 200;
        let odd = delta_odd_part(n).unwrap();
        let delta = eta24_expand(n).unwrap();
        for i in 0..n {
            if i % 2 == 0 {
                assert_eq!(odd.coeffs()[i], 0, "q^{i}");
            } else {
                assert_eq!(odd.coeffs()[i], delta.coeffs()[i], "q^{i}");
            }
        }
    }
}

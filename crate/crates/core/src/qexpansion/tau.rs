//! The discriminant Δ and the Ramanujan tau table.

use std::sync::{Arc, Mutex};

use rug::ops::Pow;
use rug::Integer;

use super::series::{mul_integers, square_integers, QSeries, DEFAULT_MAX_ORDER};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Euler's function `(q;q)_∞` truncated at `order`, from the pentagonal
/// number theorem. Returned sparse as `(exponent, ±1)`.
fn pentagonal(order: usize) -> Vec<(usize, i64)> {
    let mut terms = vec![(0usize, 1i64)];
    for k in 1usize.. {
        let a = k * (3 * k - 1) / 2;
        if a >= order {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((a, sign));
        let b = k * (3 * k + 1) / 2;
        if b < order {
            terms.push((b, sign));
        }
    }
    terms.sort_unstable();
    terms
}

/// `(q;q)_∞^24` truncated at `order`, by sparse squaring followed by dense
/// repeated squaring: `p^2, p^4, p^8, p^16, p^24 = p^16 p^8`.
fn euler_pow24(order: usize) -> Vec<Integer> {
    let p = pentagonal(order);
    let mut p2 = vec![0i64; order];
    for &(i, a) in &p {
        for &(j, b) in &p {
            if i + j >= order {
                break;
            }
            p2[i + j] += a * b;
        }
    }
    let p2: Vec<Integer> = p2.into_iter().map(Integer::from).collect();
    let p4 = square_integers(&p2, order);
    let p8 = square_integers(&p4, order);
    let p16 = square_integers(&p8, order);
    mul_integers(&p16, &p8, order)
}

/// q-expansion of `Δ = q ∏ (1 - q^n)^24` truncated at order `n`.
pub fn eta24_expand(n: usize) -> Result<QSeries> {
    eta24_expand_with_budget(n, DEFAULT_MAX_ORDER)
}

pub fn eta24_expand_with_budget(n: usize, max_order: usize) -> Result<QSeries> {
    if n < 2 {
        return Err(Error::Domain(format!("truncation order must be >= 2, got {n}")));
    }
    if n > max_order {
        return Err(Error::Resource(format!(
            "series order {n} exceeds the configured budget of {max_order}"
        )));
    }
    let mut coeffs = Vec::with_capacity(n);
    coeffs.push(Integer::new());
    coeffs.extend(euler_pow24(n - 1));
    Ok(QSeries::from_integers(coeffs))
}

/// `τ(n)` for `1 <= n <= limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    // values[0] is unused and zero
    values: Vec<Integer>,
}

impl TauTable {
    pub fn compute(limit: usize) -> Result<Self> {
        Self::compute_with_budget(limit, DEFAULT_MAX_ORDER)
    }

    pub fn compute_with_budget(limit: usize, max_order: usize) -> Result<Self> {
        if limit == 0 {
            return Err(Error::Domain("tau table limit must be >= 1".into()));
        }
        let delta = eta24_expand_with_budget(limit + 1, max_order)?;
        Ok(Self::from_delta(&delta))
    }

    /// Reads `τ(n)` off the coefficients of a Δ expansion.
    pub fn from_delta(delta: &QSeries) -> Self {
        let values = delta
            .coeffs()
            .iter()
            .map(|c| c.numer().clone())
            .collect();
        TauTable { values }
    }

    /// Table built from explicit values `τ(1), τ(2), ...`.
    pub fn from_values(values: impl IntoIterator<Item = Integer>) -> Result<Self> {
        let mut v = vec![Integer::new()];
        v.extend(values);
        if v.len() < 2 || v[1] != 1 {
            return Err(Error::Domain("a tau table must start with τ(1) = 1".into()));
        }
        Ok(TauTable { values: v })
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    pub fn tau(&self, n: usize) -> Option<&Integer> {
        if n == 0 {
            return None;
        }
        self.values.get(n)
    }

    pub fn truncated(&self, limit: usize) -> Self {
        let end = (limit + 1).clamp(2, self.values.len());
        TauTable {
            values: self.values[..end].to_vec(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Integer)> {
        self.values.iter().enumerate().skip(1)
    }

    /// First `n` where `|τ(n)| <= d(n) n^{11/2}` fails, checked exactly as
    /// `τ(n)^2 <= d(n)^2 n^11`.
    pub fn deligne_violation(&self) -> Option<usize> {
        let divisors = divisor_counts(self.limit());
        self.iter().find_map(|(n, t)| {
            let lhs = Integer::from(t * t);
            let rhs = Integer::from(divisors[n] as u64).pow(2) * Integer::from(n as u64).pow(11);
            (lhs > rhs).then_some(n)
        })
    }
}

/// `d(n)` for `n <= limit`.
fn divisor_counts(limit: usize) -> Vec<u32> {
    let mut d = vec![0u32; limit + 1];
    for i in 1..=limit {
        for j in (i..=limit).step_by(i) {
            d[j] += 1;
        }
    }
    d
}

fn smallest_prime_factors(limit: usize) -> Vec<usize> {
    let mut spf = vec![0usize; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for j in (i..=limit).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i;
                }
            }
        }
    }
    spf
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Shared τ table that grows on demand. Results never depend on the order in
/// which callers requested sizes, since every table is an exact prefix.
pub fn shared_tau_table(limit: usize) -> Result<Arc<TauTable>> {
    static CACHE: Mutex<Option<Arc<TauTable>>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref() {
        if t.limit() >= limit {
            return Ok(Arc::clone(t));
        }
    }
    let table = Arc::new(TauTable::compute(limit)?);
    *guard = Some(Arc::clone(&table));
    Ok(table)
}

/// Checks `τ(mn) = τ(m)τ(n)` for coprime `m, n` with `mn <= limit` and the Hecke
/// recursion `τ(p^{r+1}) = τ(p)τ(p^r) - p^11 τ(p^{r-1})` at every prime power `<= limit`.
pub fn tau_structure_check(table: &TauTable, limit: usize) -> Result<VerificationReport> {
    if limit > table.limit() {
        return Err(Error::Domain(format!(
            "tau table holds {} values, {limit} requested",
            table.limit()
        )));
    }
    let t = |n: usize| table.tau(n).expect("within table");
    let mut checks = 0u64;
    let mut failure: Option<(usize, Integer, Integer)> = None;

    'outer: for m in 2..=limit {
        for n in m + 1..=limit / m {
            if gcd(m, n) != 1 {
                continue;
            }
            checks += 1;
            let prod = Integer::from(t(m) * t(n));
            if *t(m * n) != prod {
                failure = Some((m * n, t(m * n).clone(), prod));
                break 'outer;
            }
        }
    }

    if failure.is_none() {
        let spf = smallest_prime_factors(limit);
        'primes: for p in 2..=limit {
            if spf[p] != p {
                continue;
            }
            let p11 = Integer::from(p as u64).pow(11);
            // τ(p^{r+1}) with τ(p^{-1}) read as 0
            let (mut prev, mut cur) = (1usize, p);
            while let Some(next) = cur.checked_mul(p).filter(|&x| x <= limit) {
                checks += 1;
                let rhs = Integer::from(t(p) * t(cur)) - Integer::from(&p11 * t(prev));
                if *t(next) != rhs {
                    failure = Some((next, t(next).clone(), rhs));
                    break 'primes;
                }
                (prev, cur) = (cur, next);
            }
        }
    }

    let report = match failure {
        Some((n, lhs, rhs)) => VerificationReport::exact(
            "tau_structure",
            lhs.to_string(),
            rhs.to_string(),
            checks,
            Some(n as u64),
        ),
        None => VerificationReport::exact(
            "tau_structure",
            t(limit).to_string(),
            t(limit).to_string(),
            checks,
            None,
        ),
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_leading_coefficient() {
        let d = eta24_expand(2).unwrap();
        assert_eq!(d, QSeries::from_i64s(&[0, 1]));
        assert!(eta24_expand(1).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            eta24_expand_with_budget(100, 50),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn pentagonal_signs() {
        // 1 - q - q^2 + q^5 + q^7 - q^12 - q^15
        let p = pentagonal(16);
        assert_eq!(
            p,
            vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]
        );
    }

    #[test]
    fn structure_small_limits() {
        let table = TauTable::compute(6).unwrap();
        assert!(tau_structure_check(&table, 6).unwrap().passed());
        assert!(tau_structure_check(&table, 4).unwrap().passed());
        assert!(tau_structure_check(&table, 1).unwrap().passed());
        assert!(tau_structure_check(&table, 7).is_err());
    }

    #[test]
    fn structure_detects_a_corrupted_table() {
        let mut values: Vec<Integer> = TauTable::compute(12).unwrap().iter().map(|(_, v)| v.clone()).collect();
        values[5] += 1; // τ(6)
        let bad = TauTable::from_values(values).unwrap();
        let r = tau_structure_check(&bad, 12).unwrap();
        assert!(!r.passed());
        assert_eq!(r.first_mismatch, Some(6));
    }

    #[test]
    fn deligne_bound_holds_on_table() {
        let table = TauTable::compute(500).unwrap();
        assert_eq!(table.deligne_violation(), None);
    }

    #[test]
    fn truncated_table_keeps_tau_one() {
        let t = TauTable::compute(10).unwrap().truncated(1);
        assert_eq!(t.limit(), 1);
        assert_eq!(*t.tau(1).unwrap(), 1);
        assert!(TauTable::from_values([Integer::from(2)]).is_err());
    }
}

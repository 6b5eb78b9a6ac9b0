use rug::ops::Pow;
use rug::{Integer, Rational};

use super::bernoulli::zeta_one_minus;
use super::series::{QSeries, DEFAULT_MAX_ORDER};
use crate::error::{Error, Result};

/// `σ_p(n)` for `0 <= n < order` (entry 0 is zero).
pub fn divisor_power_sums(p: u32, order: usize) -> Vec<Integer> {
    let mut sums = vec![Integer::new(); order];
    for d in 1..order {
        let dp = Integer::from(d as u64).pow(p);
        for m in (d..order).step_by(d) {
            sums[m] += &dp;
        }
    }
    sums
}

/// `E_k = 1 + (2/ζ(1-k)) Σ σ_{k-1}(n) q^n` truncated at order `n`.
pub fn eisenstein_qseries(k: u32, n: usize) -> Result<QSeries> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::Domain(format!(
            "Eisenstein series need an even weight >= 4, got {k}"
        )));
    }
    if n > DEFAULT_MAX_ORDER {
        return Err(Error::Resource(format!(
            "series order {n} exceeds the configured budget of {DEFAULT_MAX_ORDER}"
        )));
    }
    let scale = Rational::from(2) / zeta_one_minus(k)?;
    let sigma = divisor_power_sums(k - 1, n);
    let coeffs = sigma
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            if i == 0 {
                Rational::from(1)
            } else {
                Rational::from(&scale * Rational::from(s))
            }
        })
        .collect();
    Ok(QSeries::from_rationals(coeffs))
}

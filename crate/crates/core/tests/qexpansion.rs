use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use tauzeta::qexpansion::{
    bernoulli, decomposition_rhs, delta_odd_part, eisenstein_qseries, eta24_expand, shared_tau_table, zeta_negative,
    QSeries, TauTable,
};

/// `Δ = q (Σ_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2})^8`, from Jacobi's identity for `η^3`.
fn jacobi_delta(n: usize) -> Vec<i128> {
    let mut a = vec![0i128; n];
    let mut k = 0i128;
    loop {
        let e = (k * (k + 1) / 2) as usize;
        if e >= n {
            break;
        }
        a[e] = if k % 2 == 0 { 2 * k + 1 } else { -(2 * k + 1) };
        k += 1;
    }
    let mut p = vec![0i128; n];
    p[0] = 1;
    for _ in 0..8 {
        let mut next = vec![0i128; n];
        for (i, x) in p.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, y) in a.iter().enumerate().take(n - i).filter(|(_, y)| **y != 0) {
                next[i + j] = next[i + j].checked_add(x.checked_mul(*y).unwrap()).unwrap();
            }
        }
        p = next;
    }
    // τ(m) is the coefficient of q^{m-1} in the eighth power
    std::iter::once(0).chain(p).take(n + 1).collect()
}

#[test]
fn tau_matches_jacobi_oracle_to_200() {
    let oracle = jacobi_delta(200);
    let table = TauTable::compute(200).unwrap();
    for m in 1..=200 {
        assert_eq!(*table.tau(m).unwrap(), oracle[m], "τ({m})");
    }
}

#[test]
fn first_tau_values() {
    let t = TauTable::compute(6).unwrap();
    let got: Vec<i64> = (1..=6).map(|n| t.tau(n).unwrap().to_i64().unwrap()).collect();
    assert_eq!(got, [1, -24, 252, -1472, 4830, -6048]);
}

#[test]
fn eta_expansion_starts_at_q() {
    let d = eta24_expand(5).unwrap();
    assert_eq!(d.coeff(0), Some(&Rational::new()));
    assert_eq!(d.coeff(1), Some(&Rational::from(1)));
}

#[test]
fn decomposition_sides_agree_to_300() {
    let lhs = delta_odd_part(300).unwrap();
    let rhs = decomposition_rhs(300).unwrap();
    assert_eq!(lhs.first_mismatch(&rhs), None);
}

#[test]
fn ramanujan_from_divisor_sums() {
    let e4 = eisenstein_qseries(4, 100).unwrap();
    let e6 = eisenstein_qseries(6, 100).unwrap();
    assert_eq!(e4.coeff(1), Some(&Rational::from(240)));
    assert_eq!(e6.coeff(1), Some(&Rational::from(-504)));
    let lhs = &(&(&e4 * &e4) * &e4) - &(&e6 * &e6);
    let delta = eta24_expand(100).unwrap().scale(&Rational::from(1728));
    assert_eq!(lhs.first_mismatch(&delta), None);
}

#[test]
fn zeta_values() {
    assert_eq!(zeta_negative(-1).unwrap(), Rational::from((-1, 12)));
    assert_eq!(zeta_negative(-7).unwrap(), Rational::from((1, 240)));
    assert_eq!(zeta_negative(-2).unwrap(), Rational::new());
    assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    assert!(zeta_negative(1).is_err());
}

fn tau(n: usize) -> Integer {
    shared_tau_table(1000).unwrap().tau(n).unwrap().clone()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplicative_on_coprime_pairs(m in 1usize..=31, n in 1usize..=31) {
        prop_assume!(gcd(m, n) == 1);
        prop_assert_eq!(tau(m * n), tau(m) * tau(n));
    }

    #[test]
    fn hecke_recursion(pi in 0usize..6, r in 1u32..4) {
        let p = [2usize, 3, 5, 7, 11, 13][pi];
        prop_assume!(p.pow(r + 1) <= 1000);
        let lhs = tau(p.pow(r + 1));
        let rhs = tau(p) * tau(p.pow(r)) - Integer::from(p).pow(11u32) * tau(p.pow(r - 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ramanujan_petersson_bound(n in 1usize..=1000) {
        let d = (1..=n).filter(|k| n % k == 0).count();
        let lhs = tau(n).square();
        let rhs = Integer::from(d * d) * Integer::from(n).pow(11u32);
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn series_product_commutes(a in prop::collection::vec(-50i64..50, 1..20), b in prop::collection::vec(-50i64..50, 1..20)) {
        let n = a.len().min(b.len());
        let x = QSeries::from_i64s(&a).truncate(n);
        let y = QSeries::from_i64s(&b).truncate(n);
        prop_assert_eq!(&x * &y, &y * &x);
    }
}

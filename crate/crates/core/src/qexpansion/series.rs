//! Truncated power series in `q` with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Largest truncation order accepted by the series constructors.
pub const DEFAULT_MAX_ORDER: usize = 1 << 16;

/// `Σ_{n < order} c_n q^n + O(q^order)`.
///
/// Coefficients at exponents `>= order` are unknown, so every operation keeps
/// only what it can prove: a sum or product has the smaller of the two orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::new(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = Rational::from(1);
        }
        s
    }

    /// `c q^exp + O(q^order)`.
    pub fn monomial(c: impl Into<Rational>, exp: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exp < order {
            s.coeffs[exp] = c.into();
        }
        s
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        QSeries { coeffs }
    }

    pub fn from_integers(coeffs: Vec<Integer>) -> Self {
        QSeries {
            coeffs: coeffs.into_iter().map(Rational::from).collect(),
        }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        QSeries {
            coeffs: coeffs.iter().map(|&c| Rational::from(c)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^n`, or `None` when `n` is beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn to_integers(&self) -> Option<Vec<Integer>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coeffs.iter().map(|c| c.numer().clone()).collect())
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries {
            coeffs: self.coeffs[..order.min(self.order())].to_vec(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| Rational::from(x * c))
                .collect(),
        }
    }

    /// The substitution `q -> q^m` (that is, `z -> m z`). The order is preserved:
    /// the result is only claimed up to the input's truncation order.
    pub fn dilate(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("dilation factor must be positive".into()));
        }
        let order = self.order();
        let mut out = Self::zero(order);
        for (j, c) in self.coeffs.iter().enumerate() {
            let idx = j * m;
            if idx >= order {
                break;
            }
            out.coeffs[idx] = c.clone();
        }
        Ok(out)
    }

    /// Index of the first coefficient where `self` and `other` differ, comparing
    /// up to the smaller order.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    fn zip_with(&self, other: &QSeries, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

/// Truncated product of integer coefficient vectors, `out.len() == order`.
///
/// Each output coefficient is an independent sum, so the loop runs in
/// parallel over output indices without affecting the result.
pub(crate) fn mul_integers(a: &[Integer], b: &[Integer], order: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); order];
    out.par_iter_mut().enumerate().for_each(|(n, acc)| {
        let lo = n.saturating_sub(b.len() - 1);
        let hi = n.min(a.len() - 1);
        if lo > hi {
            return;
        }
        for i in lo..=hi {
            let ai = &a[i];
            if ai.cmp0().is_eq() {
                continue;
            }
            let bj = &b[n - i];
            if bj.cmp0().is_eq() {
                continue;
            }
            *acc += ai * bj;
        }
    });
    out
}

/// Truncated square, using the symmetry of the convolution.
pub(crate) fn square_integers(a: &[Integer], order: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); order];
    let len = a.len();
    out.par_iter_mut().enumerate().for_each(|(n, acc)| {
        let lo = n.saturating_sub(len - 1);
        // pairs (i, n - i) with i < n - i counted twice
        let mut cross = Integer::new();
        let mut i = lo;
        while 2 * i < n {
            let (x, y) = (&a[i], &a[n - i]);
            if !x.cmp0().is_eq() && !y.cmp0().is_eq() {
                cross += x * y;
            }
            i += 1;
        }
        cross <<= 1;
        if n % 2 == 0 && n / 2 < len {
            let m = &a[n / 2];
            cross += m * m;
        }
        *acc = cross;
    });
    out
}

fn mul_rationals(a: &[Rational], b: &[Rational], order: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); order];
    out.par_iter_mut().enumerate().for_each(|(n, acc)| {
        for i in 0..=n {
            if a[i].cmp0().is_eq() || b[n - i].cmp0().is_eq() {
                continue;
            }
            *acc += Rational::from(&a[i] * &b[n - i]);
        }
    });
    out
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.zip_with(rhs, |a, b| Rational::from(a + b))
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.zip_with(rhs, |a, b| Rational::from(a - b))
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        if order == 0 {
            return QSeries::zero(0);
        }
        match (self.to_integers(), rhs.to_integers()) {
            (Some(a), Some(b)) => {
                let prod = if self == rhs {
                    square_integers(&a[..order], order)
                } else {
                    mul_integers(&a[..order], &b[..order], order)
                };
                QSeries::from_integers(prod)
            }
            _ => QSeries::from_rationals(mul_rationals(
                &self.coeffs[..order],
                &rhs.coeffs[..order],
                order,
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dilation_examples() {
        let q = QSeries::monomial(1, 1, 5);
        assert_eq!(q.dilate(2).unwrap(), QSeries::monomial(1, 2, 5));

        let e6 = QSeries::from_i64s(&[1, -504, 0, 0, 0, 0]);
        let d = e6.dilate(4).unwrap();
        assert_eq!(d, QSeries::from_i64s(&[1, 0, 0, 0, -504, 0]));
        assert_eq!(e6.dilate(1).unwrap(), e6);
        assert!(e6.dilate(0).is_err());
    }

    #[test]
    fn product_order_is_minimum() {
        let a = QSeries::from_i64s(&[1, 1, 1, 1, 1, 1]);
        let b = QSeries::from_i64s(&[1, -1, 0]);
        let p = &a * &b;
        assert_eq!(p.order(), 3);
        assert_eq!(p, QSeries::from_i64s(&[1, 0, 0]));
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn rational_product() {
        let a = QSeries::from_rationals(vec![Rational::from((1, 2)), Rational::from((1, 3))]);
        let p = &a * &a;
        assert_eq!(p.coeffs()[0], Rational::from((1, 4)));
        assert_eq!(p.coeffs()[1], Rational::from((1, 3)));
    }

    fn exact_product(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    proptest! {
        #[test]
        fn truncated_product_matches_exact_product(
            a in proptest::collection::vec(-50i64..50, 1..20),
            b in proptest::collection::vec(-50i64..50, 1..20),
        ) {
            let n = a.len().min(b.len());
            let full = exact_product(&a, &b);
            let p = &QSeries::from_i64s(&a) * &QSeries::from_i64s(&b);
            prop_assert_eq!(p.order(), n);
            prop_assert_eq!(p, QSeries::from_i64s(&full[..n]));
        }

        #[test]
        fn squaring_matches_general_product(a in proptest::collection::vec(-50i64..50, 1..25)) {
            let s = QSeries::from_i64s(&a);
            let ints = s.to_integers().unwrap();
            let sq = square_integers(&ints, a.len());
            let gen = mul_integers(&ints, &ints, a.len());
            prop_assert_eq!(sq, gen);
        }
    }
}

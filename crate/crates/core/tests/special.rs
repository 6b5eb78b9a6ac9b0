use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};
use tauzeta::precision::rel_err;
use tauzeta::special::{
    alpha_from_u, alpha_point, combination_at, delta_at, delta_from_alpha, eisenstein_at, f_hyper, find_alpha_polynomial,
    lambert_weight11, theta_quotient_product, u_from_alpha, CombinationSpec, EisensteinRoute, RelationSearch,
};
use tauzeta::{BigReal, Error, PrecCtx};

fn ctx() -> PrecCtx {
    PrecCtx::new(128)
}

fn big(c: &PrecCtx, s: &str) -> BigReal {
    BigReal::parse(c, s).unwrap()
}

fn close(a: &BigReal, b: &Float, bits: i32) -> bool {
    rel_err(a.as_float(), b) < Float::with_val(64, 1) >> bits
}

#[test]
fn delta_from_alpha_grid() {
    let c = ctx();
    for s in ["0.1", "0.5", "0.9"] {
        let a = big(&c, s);
        let u = u_from_alpha(&a, &c).unwrap();
        let lhs = delta_from_alpha(&a, &c).unwrap();
        let rhs = delta_at(&u, &c).unwrap();
        assert!(close(&lhs, rhs.as_float(), 118), "α = {s}");
    }
}

#[test]
fn delta_at_half_closed_form() {
    let c = ctx();
    let d = delta_at(&big(&c, "0.5"), &c).unwrap();
    let f = f_hyper(&big(&c, "0.5"), &c).unwrap();
    // (1/16)(1/2)(1/2)^4 F(1/2)^12
    let expect = f.into_float().pow(12u32) / 512u32;
    assert!(close(&d, &expect, 120));
}

#[test]
fn alpha_roundtrip_third() {
    let c = ctx();
    let third = BigReal::from_rational(&c, &Rational::from((1, 3)));
    let u = u_from_alpha(&third, &c).unwrap();
    let back = alpha_from_u(&u, &c).unwrap();
    assert!(close(&back, third.as_float(), 118));
}

#[test]
fn alpha_small_at_large_u() {
    let c = ctx();
    let a = alpha_from_u(&big(&c, "5"), &c).unwrap();
    assert!(a.to_f64() < 1e-8 && a.to_f64() > 0.0);
}

#[test]
fn theta_product_is_alpha_power() {
    let c = ctx();
    for s in ["1", "3", "0.7"] {
        let u = big(&c, s);
        let lhs = theta_quotient_product(&u, &c).unwrap();
        let a = alpha_from_u(&u, &c).unwrap().into_float();
        let rhs = a.pow(-0.125f64);
        assert!(close(&lhs, &rhs, 118), "u = {s}");
    }
}

#[test]
fn lambert_at_symmetry_point() {
    let c = ctx();
    let lhs = lambert_weight11(&big(&c, "0.5"), &c).unwrap();
    let f = f_hyper(&big(&c, "0.5"), &c).unwrap().into_float();
    // (1/32)(1/2)(2 + 251/2 + 876/4 + 251/8 + 2/16) F^12 = (378/64) F^12
    let rhs = f.pow(12u32) * Float::with_val(160, 378) / 64u32;
    assert!(close(&lhs, &rhs, 118));
}

#[test]
fn e4_alpha_forms() {
    let c = ctx();
    let u = big(&c, "0.8");
    let a = alpha_from_u(&u, &c).unwrap().into_float();
    let p = alpha_point(&BigReal::new(&c, &a), &c).unwrap();
    let f4 = p.f_alpha.into_float().pow(4u32);
    let a2 = Float::with_val(160, a.square_ref());
    let forms = [
        (1, Float::with_val(160, 1) + Float::with_val(160, &a * 14u32) + &a2),
        (2, Float::with_val(160, 1) - &a + &a2),
        (4, Float::with_val(160, 1) - &a + Float::with_val(160, &a2 / 16u32)),
    ];
    for (j, poly) in forms {
        let e = eisenstein_at(4, j, &u, &c, EisensteinRoute::Direct).unwrap();
        assert!(close(&e, &(poly * &f4), 118), "j = {j}");
    }
}

#[test]
fn slow_region_needs_alpha_route() {
    let c = ctx();
    let u = big(&c, "0.02");
    assert!(matches!(
        eisenstein_at(6, 1, &u, &c, EisensteinRoute::Direct),
        Err(Error::SlowConvergence(_))
    ));
    let via_alpha = eisenstein_at(6, 1, &u, &c, EisensteinRoute::AlphaPolynomial).unwrap();
    // E6(i/u) = -u^6 E6(iu) relates the slow point to a fast one
    let inv = eisenstein_at(6, 1, &big(&c, "50"), &c, EisensteinRoute::Direct).unwrap().into_float();
    let expect = -inv * Float::with_val(160, 50).pow(6u32);
    assert!(close(&via_alpha, &expect, 110));
}

#[test]
fn relation_search_reports_absence() {
    let c = ctx();
    let spec = CombinationSpec::single(2, 1).unwrap();
    let r = find_alpha_polynomial(&spec, 4, &c).unwrap();
    assert!(matches!(r, RelationSearch::NoRelation { .. }));
}

#[test]
fn q8_relation() {
    let c = ctx();
    let r = find_alpha_polynomial(&CombinationSpec::q(8).unwrap(), 8, &c).unwrap();
    let p = r.polynomial().unwrap();
    let expect: Vec<Rational> = [0, 30, 195, 30].iter().map(|&x| Rational::from(x)).collect();
    assert_eq!(p.coeffs, expect);
}

#[test]
fn domain_errors() {
    let c = ctx();
    assert!(delta_at(&big(&c, "0"), &c).is_err());
    assert!(delta_at(&big(&c, "-1"), &c).is_err());
    assert!(f_hyper(&big(&c, "1"), &c).is_err());
    assert!(alpha_from_u(&big(&c, "0"), &c).is_err());
    assert!(lambert_weight11(&big(&c, "-2"), &c).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_routes_agree(u in 0.2f64..3.0) {
        let c = ctx();
        let ub = BigReal::new(&c, u);
        let a = alpha_from_u(&ub, &c).unwrap();
        let lhs = delta_at(&ub, &c).unwrap();
        let rhs = delta_from_alpha(&a, &c).unwrap();
        prop_assert!(close(&lhs, rhs.as_float(), 115));
    }

    #[test]
    fn roundtrip_alpha(a in 0.001f64..0.999) {
        let c = ctx();
        let ab = BigReal::new(&c, a);
        let u = u_from_alpha(&ab, &c).unwrap();
        let back = alpha_from_u(&u, &c).unwrap();
        prop_assert!(close(&back, ab.as_float(), 110));
    }

    #[test]
    fn involution_weight_12(u in 0.3f64..3.0) {
        let c = ctx();
        let ub = BigReal::new(&c, u);
        let inv = BigReal::new(&c, Float::with_val(160, ub.as_float().recip_ref()));
        let lhs = delta_at(&inv, &c).unwrap();
        let rhs = delta_at(&ub, &c).unwrap().into_float() * ub.as_float().clone().pow(12u32);
        prop_assert!(close(&lhs, &rhs, 115));
    }

    #[test]
    fn eisenstein_routes_agree(u in 0.08f64..2.0, kk in 0usize..3) {
        let c = ctx();
        let k = [4u32, 6, 8][kk];
        let ub = BigReal::new(&c, u);
        let a = eisenstein_at(k, 1, &ub, &c, EisensteinRoute::Direct).unwrap();
        let b = eisenstein_at(k, 1, &ub, &c, EisensteinRoute::AlphaPolynomial).unwrap();
        prop_assert!(close(&a, b.as_float(), 105));
    }

    #[test]
    fn combination_is_linear(u in 0.3f64..2.0) {
        let c = ctx();
        let ub = BigReal::new(&c, u);
        let p = combination_at(&CombinationSpec::p(8).unwrap(), &ub, &c).unwrap();
        let e = |j| eisenstein_at(8, j, &ub, &c, EisensteinRoute::Direct).unwrap().into_float();
        let expect = e(1) - e(2) * 258u32 + e(4) * 512u32;
        let diff = Float::with_val(160, p.as_float() - &expect).abs();
        prop_assert!(diff < Float::with_val(64, 1) >> 110);
    }
}

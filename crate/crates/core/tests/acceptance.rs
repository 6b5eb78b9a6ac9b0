//! Runs every acceptance criterion at its stated tolerance and prints one
//! PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use rug::ops::Pow;
use rug::{Float, Integer};
use tauzeta::identities::{
    corollary_l, critical_l_integral, l12_log_integral, l_dirichlet, l_mellin, theorem_double, verify,
    CorollaryConstants, EvalOptions, IdentityId, VerifyParams,
};
use tauzeta::precision::rel_err;
use tauzeta::quadrature::{gauss_legendre, tanh_sinh, QuadResult};
use tauzeta::PrecCtx;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn c1() -> Outcome {
    let t = Instant::now();
    let r = verify(IdentityId::Lemma21, &VerifyParams { n: Some(1000), ..Default::default() }, &PrecCtx::new(128)).unwrap();
    let e = t.elapsed();
    outcome(r.passed() && r.terms == 1000 && within(e, 10), format!("1000 coefficients exact, {e:.2?}"))
}

fn c2() -> Outcome {
    let t = Instant::now();
    let r = verify(IdentityId::Ramanujan1728, &VerifyParams { n: Some(500), ..Default::default() }, &PrecCtx::new(128)).unwrap();
    let e = t.elapsed();
    outcome(r.passed() && r.terms == 500 && within(e, 5), format!("500 coefficients exact, {e:.2?}"))
}

fn c3() -> Outcome {
    let r = verify(IdentityId::TauStructure, &VerifyParams { n: Some(1000), ..Default::default() }, &PrecCtx::new(128)).unwrap();
    outcome(r.passed(), format!("n <= 1000, first mismatch {:?}", r.first_mismatch))
}

fn c4() -> Outcome {
    let ctx = PrecCtx::new(128);
    let opts = EvalOptions::default();
    let t = Instant::now();
    let a = l12_log_integral(&ctx, &opts).unwrap();
    let b = l_dirichlet(12, &ctx, &opts).unwrap();
    let e = t.elapsed();
    let rel = rel_err(a.value(), b.value());
    outcome(a.converged && rel < 1e-15 && within(e, 60), format!("rel_err {:.3e}, {e:.2?}", rel.to_f64()))
}

fn c5() -> Outcome {
    let ctx = PrecCtx::new(128);
    let opts = EvalOptions::default();
    let consts = CorollaryConstants::default();
    let exact = consts.q13 == 122_987_403_000u64
        && consts.q14 == 798_232_309_875u64
        && consts.q15 == rug::Rational::from((67_002_093_132_975u64, 4u32));
    let mut ok = exact;
    let mut detail = Vec::new();
    for k in 13..=15 {
        let t = Instant::now();
        let a = corollary_l(k, &ctx, &opts).unwrap();
        let b = l_dirichlet(k, &ctx, &opts).unwrap();
        let e = t.elapsed();
        let rel = rel_err(a.value(), b.value()).to_f64();
        ok &= a.converged && rel < 1e-8 && within(e, 15 * 60);
        detail.push(format!("k={k} rel_err {rel:.3e} {e:.2?}"));
    }
    outcome(ok, detail.join("; "))
}

fn c6() -> Outcome {
    let ctx = PrecCtx::new(128);
    let opts = EvalOptions::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for k in 12..=15 {
        let t = Instant::now();
        let a = theorem_double(k, &ctx, &opts).unwrap();
        let b = l_dirichlet(k, &ctx, &opts).unwrap();
        let e = t.elapsed();
        let rel = rel_err(a.value(), b.value()).to_f64();
        ok &= a.converged && rel < 1e-8 && within(e, 20 * 60);
        detail.push(format!("k={k} rel_err {rel:.3e} {e:.2?}"));
    }
    outcome(ok, detail.join("; "))
}

fn c7() -> Outcome {
    let ctx = PrecCtx::new(128);
    let opts = EvalOptions::default();
    let t = Instant::now();
    let mut worst = 0f64;
    let mut ok = true;
    for k in 1..=11 {
        let a = critical_l_integral(k, &ctx, &opts).unwrap();
        let b = l_mellin(k, &ctx, &opts).unwrap();
        let rel = rel_err(a.value(), b.value()).to_f64();
        worst = worst.max(rel);
        ok &= a.converged && b.converged && rel < 1e-20;
    }
    let e = t.elapsed();
    outcome(ok && within(e, 60), format!("worst rel_err {worst:.3e}, {e:.2?}"))
}

fn c8() -> Outcome {
    let ctx = PrecCtx::new(128);
    let opts = EvalOptions::default();
    let bits = ctx.working_bits();
    let two_pi = ctx.pi() * 2u32;
    let fact = |n: i64| Float::with_val(bits, &Integer::from(Integer::factorial(n as u32)));
    let mut worst = 0f64;
    let mut ok = true;
    for k in 1..=5i64 {
        let lk = l_mellin(k, &ctx, &opts).unwrap();
        let lm = l_mellin(12 - k, &ctx, &opts).unwrap();
        let lhs = Float::with_val(bits, (&two_pi).pow(k as i32 - 12)) * fact(11 - k) * lm.value();
        let rhs = Float::with_val(bits, (&two_pi).pow(-(k as i32))) * fact(k - 1) * lk.value();
        let rel = rel_err(&lhs, &rhs).to_f64();
        worst = worst.max(rel);
        ok &= rel < 1e-20;
    }
    outcome(ok, format!("worst residual {worst:.3e}"))
}

fn c9() -> Outcome {
    let ctx = PrecCtx::new(128);
    let mut ok = true;
    let mut detail = Vec::new();
    for id in [IdentityId::PolyP8, IdentityId::PolyQ8, IdentityId::PolyP10, IdentityId::PolyQ10] {
        let r = verify(id, &VerifyParams::default(), &ctx).unwrap();
        ok &= r.passed();
        detail.push(format!("{id} {}", r.status.as_str()));
    }
    for id in [IdentityId::L12Extra1, IdentityId::L12Extra2] {
        let p = VerifyParams { tolerance: Some(1e-25), ..Default::default() };
        let r = verify(id, &p, &ctx).unwrap();
        ok &= r.passed();
        detail.push(format!("{id} worst rel_err {}", r.rel_err));
    }
    outcome(ok, detail.join("; "))
}

fn honest(r: &QuadResult, truth: &Float) -> (bool, f64) {
    let err = Float::with_val(truth.prec(), r.value() - truth).abs();
    let bound = Float::with_val(truth.prec(), r.err() * 4u32);
    (r.converged && err <= bound, err.to_f64())
}

fn c10() -> Outcome {
    let ctx = PrecCtx::new(128);
    let bits = ctx.working_bits();
    let mut ok = true;
    let mut notes = Vec::new();

    // Gauss-Legendre with n points integrates x^d exactly for d <= 2n - 1
    let (a, b) = (Float::with_val(bits, -1), Float::with_val(bits, 1));
    for n in [2usize, 5, 8, 13] {
        for d in 0..(2 * n as u32) {
            let r = gauss_legendre(|node| Ok(Float::with_val(bits, node.x.clone().pow(d))), &a, &b, n, &ctx).unwrap();
            let truth = if d % 2 == 1 { Float::new(bits) } else { Float::with_val(bits, 2) / (d + 1) };
            let err = Float::with_val(bits, r.value() - &truth).abs();
            ok &= err < ctx.pow2(-(ctx.target_bits() as i32) + 4);
        }
    }
    notes.push("GL exactness".to_string());

    let zero = ctx.zero();
    let one = ctx.one();
    let pi = ctx.pi();
    let cases: Vec<(&str, Box<dyn Fn(&tauzeta::quadrature::Node) -> tauzeta::Result<Float> + Sync>, Float)> = vec![
        ("x^2", Box::new(move |n| Ok(Float::with_val(bits, n.x.clone().square()))), Float::with_val(bits, 1) / 3u32),
        ("log x", Box::new(move |n| Ok(Float::with_val(bits, n.from_a.ln_ref()))), Float::with_val(bits, -1)),
        ("1/sqrt x", Box::new(move |n| Ok(Float::with_val(bits, n.from_a.recip_sqrt_ref()))), Float::with_val(bits, 2)),
        (
            "1/sqrt(x(1-x))",
            Box::new(move |n| Ok(Float::with_val(bits, &n.from_a * &n.to_b).recip_sqrt())),
            pi.clone(),
        ),
        (
            "log(x) log(1-x)",
            Box::new(move |n| Ok(Float::with_val(bits, n.from_a.ln_ref()) * Float::with_val(bits, n.to_b.ln_ref()))),
            Float::with_val(bits, 2) - Float::with_val(bits, &pi * &pi) / 6u32,
        ),
        ("exp x", Box::new(move |n| Ok(Float::with_val(bits, n.x.exp_ref()))), Float::with_val(bits, 1).exp() - 1u32),
    ];
    for (name, f, truth) in &cases {
        let r = tanh_sinh(f, &zero, &one, &ctx, 12).unwrap();
        let (h, err) = honest(&r, truth);
        ok &= h && err < 1e-30;
        notes.push(format!("{name} err {err:.1e}"));
    }
    outcome(ok, notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 Δ as Eisenstein products, 1000 coefficients", c1),
        ("2 1728Δ = E4^3 - E6^2, 500 coefficients", c2),
        ("3 τ multiplicativity and Hecke recursion", c3),
        ("4 L(Δ,12) log integral vs Dirichlet series", c4),
        ("5 closed double integrals k = 13, 14, 15", c5),
        ("6 general double integral k = 12..15", c6),
        ("7 critical values k = 1..11", c7),
        ("8 functional equation k = 1..5", c8),
        ("9 polynomial discovery and building blocks", c9),
        ("10 quadrature property suite", c10),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let o = run();
        if !o.ok {
            failures += 1;
        }
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}

//! Tanh-sinh (double exponential) quadrature with level refinement.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rug::Float;

use super::{Node, QuadResult};
use crate::error::{Error, Result};
use crate::precision::{decimal_string, PrecCtx};

/// Levels below this are never declared converged.
const MIN_LEVEL: u32 = 3;

#[derive(Debug, Clone)]
pub struct QuadConfig {
    pub max_level: u32,
    /// Relative convergence threshold; defaults to `2^(8 - target_bits)`.
    pub rel_tol: Option<Float>,
}

impl QuadConfig {
    pub fn new(max_level: u32) -> Self {
        QuadConfig {
            max_level,
            rel_tol: None,
        }
    }

    fn threshold(&self, ctx: &PrecCtx) -> Float {
        match &self.rel_tol {
            Some(t) => ctx.float(t),
            None => ctx.pow2(8 - ctx.target_bits() as i32),
        }
    }
}

/// One abscissa of the reference rule on (-1, 1): `delta = 1 - tanh(π/2 sinh t)`
/// and the weight `(π/2) cosh t / cosh²(π/2 sinh t)` without the step factor.
struct RefNode {
    delta: Float,
    weight: Float,
}

type NodeSet = Arc<Vec<(bool, RefNode)>>;

/// Nodes first introduced at `level`; the bool marks the centre node `t = 0`.
fn level_nodes(level: u32, bits: u32) -> NodeSet {
    static CACHE: Mutex<Option<HashMap<(u32, u32), NodeSet>>> = Mutex::new(None);
    {
        let guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(set) = guard.as_ref().and_then(|m| m.get(&(level, bits))) {
            return Arc::clone(set);
        }
    }
    let set = Arc::new(build_level(level, bits));
    let mut guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .get_or_insert_with(HashMap::new)
        .insert((level, bits), Arc::clone(&set));
    set
}

fn build_level(level: u32, bits: u32) -> Vec<(bool, RefNode)> {
    let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
    // weights below 2^-(2 bits) cannot matter even against x^{-1/2} singularities
    let mut cutoff = Float::with_val(bits, 1);
    cutoff >>= 2 * bits;
    let h = {
        let mut h = Float::with_val(bits, 1);
        h >>= level;
        h
    };
    let mut out = Vec::new();
    if level == 0 {
        out.push((
            true,
            RefNode {
                delta: Float::with_val(bits, 1),
                weight: half_pi.clone(),
            },
        ));
    }
    let (start, step) = if level == 0 { (1u64, 1u64) } else { (1, 2) };
    let mut j = start;
    loop {
        let t = Float::with_val(bits, &h * j);
        let s = Float::with_val(bits, &half_pi * t.clone().sinh());
        let es = s.clone().exp();
        let ems = Float::with_val(bits, es.recip_ref());
        let e2s = Float::with_val(bits, &es * &es);
        let delta = Float::with_val(bits, 2u32 / (e2s + 1u32));
        let cosh_s = Float::with_val(bits, &es + &ems) / 2u32;
        let weight = Float::with_val(bits, &half_pi * t.cosh()) / cosh_s.square();
        let done = weight < cutoff || delta.is_zero();
        if !done {
            out.push((false, RefNode { delta, weight }));
        }
        if done {
            break;
        }
        j += step;
    }
    out
}

/// Value, absolute error and node count returned by an inner evaluation.
pub(crate) struct Sample {
    pub value: Float,
    pub err: Float,
    pub nodes: u64,
    pub failure: Option<String>,
}

fn check_finite(v: &Float, node: &Node) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Evaluation {
            node: decimal_string(&node.x),
            reason: format!("integrand returned {v}"),
        })
    }
}

fn make_nodes(rn: &RefNode, centre: bool, a: &Float, b: &Float, c: &Float, r: &Float, bits: u32) -> Vec<(Node, Float)> {
    let near = Float::with_val(bits, r * &rn.delta);
    let far = Float::with_val(bits, r * Float::with_val(bits, 2u32 - &rn.delta));
    let w = Float::with_val(bits, r * &rn.weight);
    if centre {
        return vec![(
            Node {
                x: c.clone(),
                from_a: near.clone(),
                to_b: near,
            },
            w,
        )];
    }
    let right = Node {
        x: Float::with_val(bits, b - &near),
        from_a: far.clone(),
        to_b: near.clone(),
    };
    let left = Node {
        x: Float::with_val(bits, a + &near),
        from_a: near,
        to_b: far,
    };
    vec![(right, w.clone()), (left, w)]
}

pub(crate) fn tanh_sinh_core<F>(
    f: F,
    a: &Float,
    b: &Float,
    ctx: &PrecCtx,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: Fn(&Node) -> Result<Sample> + Sync,
{
    let bits = ctx.working_bits();
    if !(a < b) {
        return Err(Error::Domain(format!(
            "integration bounds must satisfy a < b, got [{}, {}]",
            decimal_string(a),
            decimal_string(b)
        )));
    }
    let c = Float::with_val(bits, a + b) / 2u32;
    let r = Float::with_val(bits, b - a) / 2u32;
    let threshold = cfg.threshold(ctx);

    let mut weighted = ctx.zero(); // Σ w f over all nodes so far
    let mut abs_weighted = ctx.zero(); // Σ |w f|
    let mut inner_err = ctx.zero(); // Σ w err
    let mut nodes = 0u64;
    let mut prev: Option<Float> = None;
    let mut last_diff: Option<Float> = None;
    let mut failure: Option<String> = None;
    let mut worst_failure = ctx.zero();

    for level in 0..=cfg.max_level {
        let set = level_nodes(level, bits);
        let points: Vec<(Node, Float)> = set
            .iter()
            .flat_map(|(centre, rn)| make_nodes(rn, *centre, a, b, &c, &r, bits))
            .collect();
        let samples: Vec<(Sample, Float)> = points
            .into_par_iter()
            .map(|(node, w)| {
                let s = f(&node)?;
                check_finite(&s.value, &node)?;
                Ok((s, w))
            })
            .collect::<Result<_>>()?;
        for (s, w) in &samples {
            weighted += Float::with_val(bits, w * &s.value);
            abs_weighted += Float::with_val(bits, w * &s.value).abs();
            inner_err += Float::with_val(bits, w * &s.err);
            nodes += s.nodes;
            if s.failure.is_some() {
                let weighted_err = Float::with_val(bits, w * &s.err);
                if failure.is_none() || weighted_err > worst_failure {
                    failure = s.failure.clone();
                    worst_failure = weighted_err;
                }
            }
        }
        let mut h = ctx.one();
        h >>= level;
        let estimate = Float::with_val(bits, &weighted * &h);
        if let Some(p) = &prev {
            let diff = Float::with_val(bits, &estimate - p).abs();
            let scale = Float::with_val(bits, estimate.clone().abs()).max(&ctx.one());
            let converged = level >= MIN_LEVEL && diff < Float::with_val(bits, &threshold * &scale);
            last_diff = Some(diff.clone());
            if converged {
                let err = total_error(diff, &abs_weighted, &inner_err, &h, bits, ctx);
                let mut res = QuadResult::new(ctx, estimate, err, nodes, level);
                // unconverged nested samples only matter if their weighted error does
                let inner = Float::with_val(bits, &inner_err * &h);
                if let Some(why) = failure.filter(|_| inner >= Float::with_val(bits, &threshold * &scale)) {
                    res.converged = false;
                    res.detail = Some(why);
                }
                return Ok(res);
            }
        }
        prev = Some(estimate);
    }

    let estimate = prev.expect("at least one level");
    let mut h = ctx.one();
    h >>= cfg.max_level;
    let diff = last_diff.unwrap_or_else(|| estimate.clone().abs());
    let err = total_error(diff, &abs_weighted, &inner_err, &h, bits, ctx);
    let mut res = QuadResult::new(ctx, estimate, err, nodes, cfg.max_level);
    res.converged = false;
    res.detail = Some(failure.unwrap_or_else(|| {
        format!(
            "no convergence on [{}, {}] after level {}",
            decimal_string(a),
            decimal_string(b),
            cfg.max_level
        )
    }));
    Ok(res)
}

/// Level difference, plus accumulated rounding and propagated inner errors.
fn total_error(diff: Float, abs_weighted: &Float, inner_err: &Float, h: &Float, bits: u32, ctx: &PrecCtx) -> Float {
    let mut roundoff = Float::with_val(bits, abs_weighted * h);
    roundoff <<= 8;
    roundoff >>= ctx.working_bits();
    let inner = Float::with_val(bits, inner_err * h);
    diff + roundoff + inner
}

/// Integrates `f` over `(a, b)` by tanh-sinh quadrature. Endpoints are never
/// sampled. The result is marked unconverged (not an error) if the level
/// difference is still above `2^(8 - target_bits) max(1, |value|)` at `max_level`.
pub fn tanh_sinh<F>(f: F, a: &Float, b: &Float, ctx: &PrecCtx, max_level: u32) -> Result<QuadResult>
where
    F: Fn(&Node) -> Result<Float> + Sync,
{
    tanh_sinh_with(f, a, b, ctx, &QuadConfig::new(max_level))
}

pub fn tanh_sinh_with<F>(f: F, a: &Float, b: &Float, ctx: &PrecCtx, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(&Node) -> Result<Float> + Sync,
{
    let zero = ctx.zero();
    tanh_sinh_core(
        |node| {
            Ok(Sample {
                value: f(node)?,
                err: zero.clone(),
                nodes: 1,
                failure: None,
            })
        },
        a,
        b,
        ctx,
        cfg,
    )
}

/// Estimates from every level up to `max_level`, for diagnostics and tests.
pub fn level_estimates<F>(f: F, a: &Float, b: &Float, ctx: &PrecCtx, max_level: u32) -> Result<Vec<Float>>
where
    F: Fn(&Node) -> Result<Float> + Sync,
{
    let mut out = Vec::new();
    for level in 0..=max_level {
        let cfg = QuadConfig {
            max_level: level,
            rel_tol: Some(ctx.zero()),
        };
        out.push(tanh_sinh_with(&f, a, b, ctx, &cfg)?.value().clone());
    }
    Ok(out)
}

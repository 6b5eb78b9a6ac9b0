//! Verification reports.

use rug::Float;
use serde::Serialize;

use crate::precision::decimal_string;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unconverged,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unconverged => "unconverged",
        }
    }
}

/// How `abs_err` and `rel_err` are compared against the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Exact equality of integers or rationals; error fields are zero.
    Exact,
    /// Pass when either the absolute or the relative error is within tolerance.
    AbsOrRel,
    /// Pass when the relative error is within tolerance.
    Relative,
}

/// Outcome of one identity check. Numbers are decimal strings so that
/// values at any working precision survive serialization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub k: Option<i64>,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: String,
    pub rel_err: String,
    pub tolerance: String,
    pub precision_bits: u32,
    pub nodes: u64,
    pub terms: u64,
    pub elapsed_ms: u64,
    pub status: Status,
    pub policy: Policy,
    pub first_mismatch: Option<u64>,
}

impl VerificationReport {
    /// Report for an exact comparison; `first_mismatch` decides the status.
    pub fn exact(
        identity: impl Into<String>,
        lhs: String,
        rhs: String,
        terms: u64,
        first_mismatch: Option<u64>,
    ) -> Self {
        VerificationReport {
            identity: identity.into(),
            k: None,
            lhs,
            rhs,
            abs_err: "0".into(),
            rel_err: "0".into(),
            tolerance: "0".into(),
            precision_bits: 0,
            nodes: 0,
            terms,
            elapsed_ms: 0,
            status: if first_mismatch.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            policy: Policy::Exact,
            first_mismatch,
        }
    }

    /// Report for a numerical comparison of `lhs` against `rhs`.
    #[allow(clippy::too_many_arguments)]
    pub fn numeric(
        identity: impl Into<String>,
        k: Option<i64>,
        lhs: &Float,
        rhs: &Float,
        tolerance: f64,
        policy: Policy,
        converged: bool,
        nodes: u64,
        terms: u64,
    ) -> Self {
        let prec = lhs.prec().max(rhs.prec());
        let abs = Float::with_val(prec, lhs - rhs).abs();
        let rel = if rhs.is_zero() {
            abs.clone()
        } else {
            Float::with_val(prec, &abs / rhs).abs()
        };
        let within_rel = rel <= tolerance;
        let within = match policy {
            Policy::Exact => abs.is_zero(),
            Policy::AbsOrRel => abs <= tolerance || within_rel,
            Policy::Relative => within_rel,
        };
        let status = if !converged {
            Status::Unconverged
        } else if within && !abs.is_nan() {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            identity: identity.into(),
            k,
            lhs: decimal_string(lhs),
            rhs: decimal_string(rhs),
            abs_err: short_string(&abs),
            rel_err: short_string(&rel),
            tolerance: format!("{tolerance:e}"),
            precision_bits: prec,
            nodes,
            terms,
            elapsed_ms: 0,
            status,
            policy,
            first_mismatch: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_k(mut self, k: i64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_identity(mut self, identity: impl Into<String>) -> Self {
        self.identity = identity.into();
        self
    }

    /// Merges a grid of sub-checks into one report: the worst errors are kept,
    /// counts are summed, and the status is the worst status seen.
    pub fn combine(identity: impl Into<String>, parts: &[VerificationReport]) -> Self {
        assert!(!parts.is_empty(), "cannot combine an empty grid");
        let worst = parts
            .iter()
            .max_by(|a, b| {
                let key = |r: &VerificationReport| r.rel_err.parse::<f64>().unwrap_or(f64::INFINITY);
                key(a).total_cmp(&key(b))
            })
            .expect("nonempty");
        let status = if parts.iter().any(|r| r.status == Status::Unconverged) {
            Status::Unconverged
        } else if parts.iter().all(|r| r.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        let mut out = worst.clone();
        out.identity = identity.into();
        out.nodes = parts.iter().map(|r| r.nodes).sum();
        out.terms = parts.iter().map(|r| r.terms).sum();
        out.status = status;
        out
    }
}

/// Error magnitudes only need a few digits.
fn short_string(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(6))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_policy() {
        let a = Float::with_val(128, 1.0);
        let b = Float::with_val(128, 1.0 + 1e-12);
        let r = VerificationReport::numeric("x", None, &a, &b, 1e-10, Policy::Relative, true, 1, 1);
        assert!(r.passed());
        let r = VerificationReport::numeric("x", None, &a, &b, 1e-14, Policy::Relative, true, 1, 1);
        assert_eq!(r.status, Status::Fail);
        let r = VerificationReport::numeric("x", None, &a, &b, 1e-10, Policy::Relative, false, 1, 1);
        assert_eq!(r.status, Status::Unconverged);
    }

    #[test]
    fn exact_reports_zero_errors() {
        let r = VerificationReport::exact("lemma", "1".into(), "1".into(), 10, None);
        assert!(r.passed());
        assert_eq!(r.abs_err, "0");
        let r = VerificationReport::exact("lemma", "1".into(), "2".into(), 10, Some(3));
        assert_eq!(r.status, Status::Fail);
    }
}

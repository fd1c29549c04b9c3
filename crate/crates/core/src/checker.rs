//! Exact verification of certificates.
//!
//! Everything here runs in rational arithmetic; no floating-point value
//! influences any verdict. The checker recomputes each endpoint value
//! from the stored coefficients, so a certificate stands or falls on
//! its exact content alone.

use crate::certificate::{theta0_certified_lower_bound, Certificate, CertifiedInterval};
use crate::error::Error;
use crate::galerkin::{form_value, potential_value, BasisSpec};
use crate::rational::Rational;

/// Largest field strength covered by the constant trial state in mode
/// zero: its Rayleigh quotient is `b^2 / 8`, which stays below
/// `theta_star * b` exactly for `0 < b < 8 * theta_star`.
pub fn constant_state_limit(theta_star: &Rational) -> Rational {
    Rational::from_int(8) * theta_star.clone()
}

/// Outcome of checking a single certified interval.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalVerdict {
    pub m: u32,
    pub ordering_ok: bool,
    pub convexity_ok: bool,
    pub left_negative: bool,
    pub right_negative: bool,
    /// `None` when the certificate stores no left value.
    pub left_matches_stored: Option<bool>,
    pub right_matches_stored: Option<bool>,
    pub pass: bool,
}

impl IntervalVerdict {
    fn failed(m: u32) -> Self {
        Self {
            m,
            ordering_ok: false,
            convexity_ok: false,
            left_negative: false,
            right_negative: false,
            left_matches_stored: None,
            right_matches_stored: None,
            pass: false,
        }
    }

    pub fn describe(&self) -> String {
        if self.pass {
            return format!("m = {:>2}: ok", self.m);
        }
        let mut reasons = Vec::new();
        if !self.ordering_ok {
            reasons.push("endpoints out of order");
        }
        if !self.convexity_ok {
            reasons.push("field quadratic not convex");
        }
        if !self.left_negative {
            reasons.push("left value not negative");
        }
        if !self.right_negative {
            reasons.push("right value not negative");
        }
        if self.left_matches_stored == Some(false) {
            reasons.push("stored left value differs from recomputation");
        }
        if self.right_matches_stored == Some(false) {
            reasons.push("stored right value differs from recomputation");
        }
        if reasons.is_empty() {
            reasons.push("unusable entry");
        }
        format!("m = {:>2}: FAIL ({})", self.m, reasons.join(", "))
    }
}

/// Recomputes one interval from scratch and compares with what the
/// certificate claims. Failures are verdicts, never errors.
pub fn verify_interval(
    entry: &CertifiedInterval,
    theta_star: &Rational,
    degree: u32,
) -> IntervalVerdict {
    let spec = match BasisSpec::new(entry.m, degree) {
        Ok(s) => s,
        Err(_) => return IntervalVerdict::failed(entry.m),
    };
    let left = form_value(
        &entry.coeffs,
        &spec,
        &Rational::from_int(entry.b_left),
        theta_star,
    );
    let right = form_value(
        &entry.coeffs,
        &spec,
        &Rational::from_int(entry.b_right),
        theta_star,
    );
    let convexity = potential_value(&entry.coeffs, &spec);
    let (left, right, convexity) = match (left, right, convexity) {
        (Ok(l), Ok(r), Ok(c)) => (l, r, c),
        _ => return IntervalVerdict::failed(entry.m),
    };

    let verdict = IntervalVerdict {
        m: entry.m,
        ordering_ok: entry.b_left < entry.b_right,
        convexity_ok: convexity.is_positive(),
        left_negative: left.is_negative(),
        right_negative: right.is_negative(),
        left_matches_stored: entry.left_value.as_ref().map(|v| *v == left),
        right_matches_stored: entry.right_value.as_ref().map(|v| *v == right),
        pass: false,
    };
    let pass = verdict.ordering_ok
        && verdict.convexity_ok
        && verdict.left_negative
        && verdict.right_negative
        && verdict.left_matches_stored.unwrap_or(true)
        && verdict.right_matches_stored.unwrap_or(true);
    IntervalVerdict { pass, ..verdict }
}

/// Outcome of the interval-chain coverage check.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageVerdict {
    pub pass: bool,
    pub detail: String,
}

/// Checks that the certified intervals, together with the constant
/// state below `8 * theta_star`, cover `(0, coverage_target]` without
/// gaps.
pub fn verify_coverage(cert: &Certificate) -> CoverageVerdict {
    let fail = |detail: String| CoverageVerdict {
        pass: false,
        detail,
    };
    let first = match cert.entries.first() {
        Some(e) => e,
        None => return fail("certificate has no intervals".to_string()),
    };
    let limit = constant_state_limit(&cert.theta_star);
    if Rational::from_int(first.b_left) >= limit {
        return fail(format!(
            "first interval starts at b = {}, not below the constant-state limit {}",
            first.b_left, limit
        ));
    }
    for pair in cert.entries.windows(2) {
        if pair[1].b_left > pair[0].b_right {
            return fail(format!(
                "gap between b = {} (m = {}) and b = {} (m = {})",
                pair[0].b_right, pair[0].m, pair[1].b_left, pair[1].m
            ));
        }
    }
    let last = cert.entries.last().expect("nonempty");
    if last.b_right < cert.coverage_target {
        return fail(format!(
            "chain ends at b = {}, short of the coverage target {}",
            last.b_right, cert.coverage_target
        ));
    }
    CoverageVerdict {
        pass: true,
        detail: format!(
            "constant state covers (0, {limit}), intervals continue through b = {}",
            last.b_right
        ),
    }
}

/// Full verification report for one certificate.
#[derive(Clone, Debug)]
pub struct CheckReport {
    /// `theta_star` is positive and at most the certified lower bound
    /// on the de Gennes constant, so negativity implies the theorem.
    pub theta_gate_ok: bool,
    /// The interval chain is asked to reach at least as far as the
    /// large-field bound reaches down.
    pub target_reaches_threshold: bool,
    pub intervals: Vec<IntervalVerdict>,
    pub coverage: CoverageVerdict,
}

impl CheckReport {
    pub fn all_intervals_pass(&self) -> bool {
        self.intervals.iter().all(|v| v.pass)
    }

    pub fn overall(&self) -> bool {
        self.theta_gate_ok
            && self.target_reaches_threshold
            && self.all_intervals_pass()
            && self.coverage.pass
    }

    pub fn summary(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!(
            "margin gate: {}",
            if self.theta_gate_ok { "ok" } else { "FAIL (theta_star exceeds the certified de Gennes lower bound)" }
        ));
        lines.push(format!(
            "target/threshold: {}",
            if self.target_reaches_threshold {
                "ok"
            } else {
                "FAIL (coverage target below large-field threshold)"
            }
        ));
        for v in &self.intervals {
            lines.push(v.describe());
        }
        lines.push(format!(
            "coverage: {} ({})",
            if self.coverage.pass { "ok" } else { "FAIL" },
            self.coverage.detail
        ));
        lines.push(format!(
            "overall: {}",
            if self.overall() { "VERIFIED" } else { "NOT VERIFIED" }
        ));
        lines.join("\n")
    }
}

/// Verifies a structurally valid certificate end to end. Deterministic
/// and exact; equal inputs give equal reports.
pub fn check_certificate(cert: &Certificate) -> CheckReport {
    let theta_gate_ok = cert.theta_star.is_positive()
        && cert.theta_star <= theta0_certified_lower_bound();
    let intervals = cert
        .entries
        .iter()
        .map(|e| verify_interval(e, &cert.theta_star, cert.basis_dim))
        .collect();
    CheckReport {
        theta_gate_ok,
        target_reaches_threshold: cert.coverage_target >= cert.large_b_threshold,
        intervals,
        coverage: verify_coverage(cert),
    }
}

/// Map of `Error` to the malformed/failed distinction used by callers
/// that need an exit code.
pub fn is_malformed(err: &Error) -> bool {
    matches!(
        err,
        Error::Malformed(_) | Error::ParseRational { .. } | Error::Io(_)
    )
}

//! Certificate generation.
//!
//! Floats do the guessing, rationals do the proving: a float eigensolve
//! proposes a trial state and a negativity window, the state is snapped
//! to small rationals, and only the exact endpoint evaluations decide
//! whether an interval is certified.

use rayon::prelude::*;

use crate::certificate::{
    Certificate, CertifiedInterval, DEFAULT_COVERAGE_TARGET, DEFAULT_LARGE_B_THRESHOLD,
};
use crate::checker::verify_coverage;
use crate::eigen::{smallest_eigpair, to_float, FloatMatrix};
use crate::error::{Error, Result};
use crate::galerkin::{form_value, forms_for, BasisSpec};
use crate::rational::{Rational, RationalVector};

/// Field strength at which mode `m` is examined: near the bottom of the
/// mode's dispersion branch, which sits close to `2m` with a spread on
/// the order of `sqrt(m)`.
pub fn initial_field(m: u32) -> f64 {
    2.0 * m as f64 + 2.25 * (m as f64).sqrt()
}

fn retry_field(m: u32) -> f64 {
    2.0 * m as f64 + 2.5 * (m as f64).sqrt()
}

/// Relative inward shrink applied to the float window before integer
/// endpoints are taken, so endpoint choices never ride on the last bits
/// of the root computation.
const WINDOW_GUARD: f64 = 1e-9;

/// Tolerance for snapping eigenvector entries to small rationals.
fn snap_tolerance() -> Rational {
    Rational::ratio(1, 100)
}

/// Roots of the float image of the field quadratic
/// `q(b) = c^T K c - (m + theta) b c^T M c + b^2 c^T P c`
/// for the given trial state; between them the form is negative.
pub fn negativity_window(
    vector: &[f64],
    spec: &BasisSpec,
    theta_star: &Rational,
) -> Result<(f64, f64)> {
    let forms = forms_for(spec.m(), spec.degree());
    let kin = to_float(&forms.kinetic)?;
    let mass = to_float(&forms.mass)?;
    let pot = to_float(&forms.potential)?;
    let a0 = kin.quad_form(vector);
    let a1 = -(spec.m() as f64 + theta_star.to_f64()) * mass.quad_form(vector);
    let a2 = pot.quad_form(vector);
    if !(a2 > 0.0) {
        return Err(Error::BasisTooSmall { m: spec.m() });
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if !(disc > 0.0) {
        return Err(Error::BasisTooSmall { m: spec.m() });
    }
    let q = -0.5 * (a1 + disc.sqrt().copysign(a1));
    let (r1, r2) = (q / a2, a0 / q);
    Ok((r1.min(r2), r1.max(r2)))
}

/// Integer endpoints inside an open window.
pub fn integer_endpoints(b_min: f64, b_max: f64) -> Result<(i64, i64)> {
    if !b_min.is_finite() || !b_max.is_finite() {
        return Err(Error::InvalidArgument(
            "window endpoints must be finite".to_string(),
        ));
    }
    let left = b_min.ceil();
    let right = b_max.floor();
    if left > right {
        return Err(Error::WindowTooNarrow {
            lo: b_min,
            hi: b_max,
        });
    }
    Ok((left as i64, right as i64))
}

/// Certifies one angular mode: returns an interval whose endpoint
/// values were verified negative in exact arithmetic.
pub fn certify_m(m: u32, degree: u32, theta_star: &Rational) -> Result<CertifiedInterval> {
    let spec = BasisSpec::new(m, degree)?;
    match certify_at(&spec, theta_star, initial_field(m)) {
        Ok(interval) => Ok(interval),
        Err(_) => certify_at(&spec, theta_star, retry_field(m)),
    }
}

fn certify_at(
    spec: &BasisSpec,
    theta_star: &Rational,
    b_ini: f64,
) -> Result<CertifiedInterval> {
    let m = spec.m();
    let forms = forms_for(m, spec.degree());
    let kin = to_float(&forms.kinetic)?;
    let mass = to_float(&forms.mass)?;
    let pot = to_float(&forms.potential)?;
    let pencil = FloatMatrix::linear_combination(&[
        (1.0, &kin),
        (-(m as f64) * b_ini, &mass),
        (b_ini * b_ini, &pot),
    ])?;
    let pair = smallest_eigpair(&pencil, &mass)?;

    let (lo, hi) = negativity_window(&pair.vector, spec, theta_star)?;
    let lo_guarded = lo + WINDOW_GUARD * lo.abs();
    let hi_guarded = hi - WINDOW_GUARD * hi.abs();
    let (b_left, b_right) = integer_endpoints(lo_guarded, hi_guarded)?;
    if b_left >= b_right {
        return Err(Error::WindowTooNarrow {
            lo: lo_guarded,
            hi: hi_guarded,
        });
    }

    let tol = snap_tolerance();
    let mut coeffs = Vec::with_capacity(spec.dim());
    coeffs.push(Rational::one());
    for &x in &pair.vector[1..] {
        coeffs.push(Rational::best_approx(x, &tol)?);
    }
    let coeffs = RationalVector::new(coeffs);

    let left = form_value(&coeffs, spec, &Rational::from_int(b_left), theta_star)?;
    let right = form_value(&coeffs, spec, &Rational::from_int(b_right), theta_star)?;
    if !left.is_negative() {
        return Err(Error::Rejected {
            m,
            detail: format!("exact value at b = {b_left} is {left}, not negative"),
        });
    }
    if !right.is_negative() {
        return Err(Error::Rejected {
            m,
            detail: format!("exact value at b = {b_right} is {right}, not negative"),
        });
    }
    Ok(CertifiedInterval {
        m,
        b_left,
        b_right,
        coeffs,
        left_value: Some(left),
        right_value: Some(right),
    })
}

/// Result of certifying a contiguous range of modes.
#[derive(Debug)]
pub struct RangeOutcome {
    pub certificate: Certificate,
    pub failures: Vec<(u32, Error)>,
}

/// Certifies modes `m_lo..=m_hi`, fanning the independent modes out
/// over a thread pool. `jobs` caps the worker count; `None` uses the
/// default pool.
pub fn certify_range(
    m_lo: u32,
    m_hi: u32,
    degree: u32,
    theta_star: &Rational,
    jobs: Option<usize>,
) -> Result<RangeOutcome> {
    if m_lo == 0 || m_lo > m_hi {
        return Err(Error::InvalidArgument(format!(
            "mode range {m_lo}..={m_hi} is unusable; modes start at 1 and must not be empty"
        )));
    }
    let modes: Vec<u32> = (m_lo..=m_hi).collect();
    let run = || {
        modes
            .par_iter()
            .map(|&m| (m, certify_m(m, degree, theta_star)))
            .collect::<Vec<_>>()
    };
    let results = match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Numerical(e.to_string()))?;
            pool.install(run)
        }
        None => run(),
    };

    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for (m, outcome) in results {
        match outcome {
            Ok(interval) => entries.push(interval),
            Err(e) => failures.push((m, e)),
        }
    }
    let mut certificate = Certificate {
        theta_star: theta_star.clone(),
        basis_dim: degree,
        coverage_target: DEFAULT_COVERAGE_TARGET,
        large_b_threshold: DEFAULT_LARGE_B_THRESHOLD,
        complete: false,
        entries,
    };
    certificate.complete = failures.is_empty() && verify_coverage(&certificate).pass;
    Ok(RangeOutcome {
        certificate,
        failures,
    })
}

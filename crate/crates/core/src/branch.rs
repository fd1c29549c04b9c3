//! Dispersion-curve sweep across field strengths.
//!
//! For each field value the lowest Rayleigh quotient is minimized over
//! the angular modes, giving a float upper envelope of the ground-state
//! eigenvalue together with the linear and quadratic comparison lines.
//! This is plotting and sanity data; certification happens elsewhere.

use std::io::{self, Write};

use crate::certificate::theta0_certified_upper_bound;
use crate::eigen::{smallest_eigenvalue, to_float, FloatMatrix};
use crate::error::{Error, Result};
use crate::galerkin::forms_for;

/// One sample of the envelope: the minimizing mode, the eigenvalue
/// bound there, and the two comparison curves.
#[derive(Clone, Copy, Debug)]
pub struct BranchPoint {
    pub b: f64,
    pub m_star: u32,
    pub lambda1: f64,
    pub theta_line: f64,
    pub const_bound: f64,
}

/// Default sweep degree; a little above the certification degree so the
/// envelope stays tight out to the largest plotted fields.
pub const SWEEP_DEGREE: u32 = 12;

fn check_field(b: f64) -> Result<()> {
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "field strength must be positive and finite, got {b}"
        )));
    }
    Ok(())
}

/// Rayleigh upper bound for the lowest eigenvalue in one angular mode.
///
/// Unlike certification this accepts `m = 0`, where the pencil loses
/// its linear term and the trial space still applies.
pub fn branch_eigenvalue(b: f64, m: u32, degree: u32) -> Result<f64> {
    check_field(b)?;
    let forms = forms_for(m, degree);
    let kinetic = to_float(&forms.kinetic)?;
    let mass = to_float(&forms.mass)?;
    let potential = to_float(&forms.potential)?;
    let pencil = FloatMatrix::linear_combination(&[
        (1.0, &kinetic),
        (-(f64::from(m)) * b, &mass),
        (b * b, &potential),
    ])?;
    smallest_eigenvalue(&pencil, &mass)
}

/// Smallest mode count that keeps the minimizing mode safely inside
/// the scanned range: the minimizer grows like half the field.
pub fn mode_limit(b: f64) -> u32 {
    (b / 2.0).ceil() as u32 + 10
}

/// Envelope value at one field strength: the minimum of the mode
/// bounds over `0..=m_max`, together with the minimizing mode.
pub fn lambda1_upper(b: f64, m_max: u32, degree: u32) -> Result<(f64, u32)> {
    check_field(b)?;
    if m_max < mode_limit(b) {
        return Err(Error::InvalidArgument(format!(
            "mode scan up to {m_max} may miss the minimizer at b = {b}; need at least {}",
            mode_limit(b)
        )));
    }
    let mut best = f64::INFINITY;
    let mut best_m = 0;
    for m in 0..=m_max {
        let value = branch_eigenvalue(b, m, degree)?;
        if value < best {
            best = value;
            best_m = m;
        }
    }
    Ok((best, best_m))
}

/// Samples the envelope over a strictly increasing grid of positive
/// field strengths.
pub fn sweep(b_grid: &[f64], degree: u32) -> Result<Vec<BranchPoint>> {
    for pair in b_grid.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::InvalidArgument(format!(
                "field grid must increase strictly, saw {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let theta_hi = theta0_certified_upper_bound().to_f64();
    let mut points = Vec::with_capacity(b_grid.len());
    for &b in b_grid {
        check_field(b)?;
        let (lambda1, m_star) = lambda1_upper(b, mode_limit(b), degree)?;
        points.push(BranchPoint {
            b,
            m_star,
            lambda1,
            theta_line: theta_hi * b,
            const_bound: b * b / 8.0,
        });
    }
    Ok(points)
}

/// Writes the sweep as CSV with seventeen significant digits per float.
pub fn write_csv<W: Write>(points: &[BranchPoint], mut out: W) -> io::Result<()> {
    writeln!(out, "b,m_star,lambda1,theta0_b,const_bound")?;
    for p in points {
        writeln!(
            out,
            "{:.16e},{},{:.16e},{:.16e},{:.16e}",
            p.b, p.m_star, p.lambda1, p.theta_line, p.const_bound
        )?;
    }
    Ok(())
}

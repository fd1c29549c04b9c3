//! Exact bound chain for large fields.
//!
//! A harmonic-approximation trial state gives, after expanding around
//! the optimal angular mode, a sufficient condition of the form
//! `A b - B sqrt(b) - C > 0` with positive constants built from rational
//! enclosures of the de Gennes minimizer data. The field `b0` where the
//! chain kicks in is bounded above in exact arithmetic, so every
//! `b > threshold >= b0` is covered with no floating-point step.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Closed interval of rationals with `lo <= hi`; a point interval is
/// allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((self.lo.clone() + self.hi.clone()) / Rational::from_int(2)).to_f64()
    }
}

/// Rational enclosures of the de Gennes ground-state data: the minimum
/// `theta0` of the half-line branch, its location `xi0` (with
/// `theta0 = xi0^2`), and the boundary constant `c1 = phi(0)^2 / 3`.
#[derive(Clone, Debug)]
pub struct SpectralConstants {
    pub theta0: RationalInterval,
    pub xi0: RationalInterval,
    pub c1: RationalInterval,
}

impl SpectralConstants {
    /// Enclosures wide enough to be safe and tight enough for the
    /// default threshold of 130.
    pub fn defaults() -> Self {
        Self {
            theta0: RationalInterval::new(
                Rational::ratio(5901, 10000),
                Rational::ratio(5902, 10000),
            )
            .expect("ordered"),
            xi0: RationalInterval::new(
                Rational::ratio(7681, 10000),
                Rational::ratio(7682, 10000),
            )
            .expect("ordered"),
            c1: RationalInterval::new(Rational::ratio(253, 1000), Rational::ratio(255, 1000))
                .expect("ordered"),
        }
    }

    /// Validates positivity and the `theta0 = xi0^2` identity: the
    /// `theta0` interval must meet the interval of squares of `xi0`.
    pub fn new(
        theta0: RationalInterval,
        xi0: RationalInterval,
        c1: RationalInterval,
    ) -> Result<Self> {
        if !theta0.lo.is_positive() || !xi0.lo.is_positive() {
            return Err(Error::InvalidArgument(
                "theta0 and xi0 enclosures must be positive".to_string(),
            ));
        }
        if c1.lo.is_negative() {
            return Err(Error::InvalidArgument(
                "c1 enclosure must be nonnegative".to_string(),
            ));
        }
        let sq_lo = xi0.lo.clone() * xi0.lo.clone();
        let sq_hi = xi0.hi.clone() * xi0.hi.clone();
        if sq_lo > theta0.hi || theta0.lo > sq_hi {
            return Err(Error::InvalidArgument(format!(
                "theta0 enclosure [{}, {}] is inconsistent with xi0^2 in [{sq_lo}, {sq_hi}]",
                theta0.lo, theta0.hi
            )));
        }
        Ok(Self { theta0, xi0, c1 })
    }
}

/// Enclosures of the first moments of the squared ground state that
/// enter the expansion:
/// `T1 = xi0`,
/// `T2 = (3/2) xi0^2`,
/// `T3 = c1/2 + (5/2) xi0^3`,
/// `T4 = 3/8 + (35/8) xi0^4 + (7/8) c1 xi0`.
#[derive(Clone, Debug)]
pub struct MomentSet {
    pub t1: RationalInterval,
    pub t2: RationalInterval,
    pub t3: RationalInterval,
    pub t4: RationalInterval,
}

/// Every moment is a sum of products of nonnegative quantities, hence
/// monotone in `xi0` and `c1`; evaluating at the enclosure endpoints
/// gives rigorous enclosures.
pub fn moment_enclosures(constants: &SpectralConstants) -> MomentSet {
    let at = |xi0: &Rational, c1: &Rational| -> (Rational, Rational, Rational, Rational) {
        let xi2 = xi0.clone() * xi0.clone();
        let xi3 = xi2.clone() * xi0.clone();
        let xi4 = xi2.clone() * xi2.clone();
        let t1 = xi0.clone();
        let t2 = Rational::ratio(3, 2) * xi2;
        let t3 = c1.clone() / Rational::from_int(2) + Rational::ratio(5, 2) * xi3;
        let t4 = Rational::ratio(3, 8)
            + Rational::ratio(35, 8) * xi4
            + Rational::ratio(7, 8) * c1.clone() * xi0.clone();
        (t1, t2, t3, t4)
    };
    let (l1, l2, l3, l4) = at(constants.xi0.lo(), constants.c1.lo());
    let (h1, h2, h3, h4) = at(constants.xi0.hi(), constants.c1.hi());
    let iv = |lo, hi| RationalInterval::new(lo, hi).expect("monotone construction");
    MomentSet {
        t1: iv(l1, h1),
        t2: iv(l2, h2),
        t3: iv(l3, h3),
        t4: iv(l4, h4),
    }
}

/// The three constants of the sufficient condition
/// `A b - B sqrt(b) - C > 0`:
/// `A = c1` from below, and from above
/// `B = 5/4 + (5/3) c1 xi0 + (37/12) xi0^4`,
/// `C = (5/3) xi0^2 (c1 + 5 xi0^3)`.
///
/// Taking `A` low and `B`, `C` high makes the condition harder, so any
/// field passing it with these values passes with the true ones.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCoefficients {
    pub a_low: Rational,
    pub b_high: Rational,
    pub c_high: Rational,
}

impl BoundCoefficients {
    pub fn new(a_low: Rational, b_high: Rational, c_high: Rational) -> Result<Self> {
        if !a_low.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "growth coefficient must be positive, got {a_low}"
            )));
        }
        if b_high.is_negative() || c_high.is_negative() {
            return Err(Error::InvalidArgument(
                "offset coefficients must be nonnegative".to_string(),
            ));
        }
        Ok(Self {
            a_low,
            b_high,
            c_high,
        })
    }
}

pub fn coefficient_bounds(constants: &SpectralConstants) -> Result<BoundCoefficients> {
    let xi_hi = constants.xi0.hi();
    let c1_hi = constants.c1.hi();
    let xi2 = xi_hi.clone() * xi_hi.clone();
    let xi3 = xi2.clone() * xi_hi.clone();
    let xi4 = xi2.clone() * xi2.clone();
    let b_high = Rational::ratio(5, 4)
        + Rational::ratio(5, 3) * c1_hi.clone() * xi_hi.clone()
        + Rational::ratio(37, 12) * xi4;
    let c_high = Rational::ratio(5, 3)
        * xi2
        * (c1_hi.clone() + Rational::from_int(5) * xi3);
    BoundCoefficients::new(constants.c1.lo().clone(), b_high, c_high)
}

/// Slack for the rational square root inside the threshold bound.
fn sqrt_slack() -> Rational {
    Rational::ratio(1, 1_000_000)
}

/// Exact upper bound on the crossover field: with `x = sqrt(b)` the
/// condition `A x^2 - B x - C > 0` holds beyond the positive root
/// `x+ = (B + sqrt(B^2 + 4AC)) / (2A)`, so every `b > b0 = x+^2` is
/// covered. Rounding the inner square root upward keeps the result an
/// upper bound.
pub fn b0_upper_bound(coeffs: &BoundCoefficients) -> Rational {
    let disc = coeffs.b_high.clone() * coeffs.b_high.clone()
        + Rational::from_int(4) * coeffs.a_low.clone() * coeffs.c_high.clone();
    let root = disc
        .sqrt_upper(&sqrt_slack())
        .expect("nonnegative discriminant");
    let numer = (coeffs.b_high.clone() + root.clone()) * (coeffs.b_high.clone() + root);
    let denom = Rational::from_int(4) * coeffs.a_low.clone() * coeffs.a_low.clone();
    numer / denom
}

/// Decides whether the bound chain covers all fields beyond the given
/// integer threshold: true iff `b0 < threshold` in exact arithmetic.
pub fn verify_large_b(constants: &SpectralConstants, threshold: i64) -> Result<bool> {
    if threshold < 1 {
        return Err(Error::InvalidArgument(format!(
            "threshold must be a positive integer, got {threshold}"
        )));
    }
    let bound = b0_upper_bound(&coefficient_bounds(constants)?);
    Ok(bound < Rational::from_int(threshold))
}

/// Proves `1 - x + x^2/2 - x^3/6 < exp(-x) < 1 - x + x^2/2 - x^3/6 + x^4/24`
/// for a positive rational `x`, the inequality pair the expansion's
/// Gaussian-tail estimates rest on.
///
/// Partial sums of the exponential series bracket `exp(-x)` within the
/// Lagrange tail `x^(n+1)/(n+1)!`; the degree grows until the bracket
/// separates from both cubic and quartic polynomials.
pub fn exp_taylor_bracket(x: &Rational) -> Result<bool> {
    if !x.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "bracket requires x > 0, got {x}"
        )));
    }
    let x2 = x.clone() * x.clone();
    let x3 = x2.clone() * x.clone();
    let x4 = x3.clone() * x.clone();
    let lower = Rational::one() - x.clone() + x2 / Rational::from_int(2)
        - x3 / Rational::from_int(6);
    let upper = lower.clone() + x4 / Rational::from_int(24);

    let mut term = Rational::one();
    let mut sum = Rational::one();
    for n in 1u32..=1000 {
        term = term * x.clone() / Rational::from_int(n as i64);
        sum = if n % 2 == 0 {
            sum + term.clone()
        } else {
            sum - term.clone()
        };
        let tail = term.clone() * x.clone() / Rational::from_int(n as i64 + 1);
        if n >= 4 {
            if sum.clone() - tail.clone() > lower && sum.clone() + tail.clone() < upper {
                return Ok(true);
            }
            if sum.clone() + tail.clone() <= lower || sum.clone() - tail >= upper {
                return Ok(false);
            }
        }
    }
    Err(Error::Numerical(format!(
        "series bracket did not separate for x = {x}"
    )))
}

/// Float prediction of the optimal angular mode at field `b`, from the
/// expansion `m_opt = b/2 - T1 sqrt(b) + T2 - (2/3) T3 / sqrt(b)`
/// evaluated at enclosure midpoints. Diagnostic only; nothing exact
/// depends on it.
pub fn predicted_m_opt(b: f64, constants: &SpectralConstants) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "field must be positive, got {b}"
        )));
    }
    let moments = moment_enclosures(constants);
    let s = b.sqrt();
    Ok(0.5 * b - moments.t1.midpoint_f64() * s + moments.t2.midpoint_f64()
        - 2.0 / 3.0 * moments.t3.midpoint_f64() / s)
}

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{Rational, RationalMatrix, RationalVector};

/// Trial space for one angular mode: span of `r^m (1 - r^2)^j` for
/// `j = 0..=degree` on the unit interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    m: u32,
    degree: u32,
}

/// Highest power of `(1 - r^2)` used by the certificate generator.
pub const DEFAULT_DEGREE: u32 = 8;

impl BasisSpec {
    /// Requires `m >= 1`: radial trial states for mode 0 need no `r^m`
    /// prefactor and are assembled through the dispersion-curve path.
    pub fn new(m: u32, degree: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "angular mode must be at least 1".to_string(),
            ));
        }
        Ok(Self { m, degree })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree as usize + 1
    }
}

/// Exact beta function at positive integers:
/// `B(z, w) = (z-1)! (w-1)! / (z+w-1)!`.
pub fn beta(z: u64, w: u64) -> Result<Rational> {
    if z == 0 || w == 0 {
        return Err(Error::InvalidArgument(format!(
            "beta arguments must be positive integers, got ({z}, {w})"
        )));
    }
    let numer = factorial(z - 1) * factorial(w - 1);
    let denom = factorial(z + w - 1);
    Ok(Rational::from_bigint(numer) / Rational::from_bigint(denom))
}

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// One beta-function term `coeff * B(z, w)` of a matrix entry.
///
/// A term whose integer coefficient vanishes contributes zero and its
/// beta factor is never evaluated; a surviving term with a non-positive
/// second argument also contributes zero. Entries stay well defined for
/// every mode `m >= 0` and every index pair.
fn beta_term(coeff: i128, z: u64, w: i64) -> Rational {
    if coeff == 0 || w <= 0 {
        return Rational::zero();
    }
    let b = beta(z, w as u64).expect("positive arguments");
    Rational::from_bigint(BigInt::from(coeff)) * b
}

/// The three quadratic forms of one trial space: mass, kinetic and the
/// coefficient of `b^2` in the field expansion.
#[derive(Clone, Debug)]
pub struct FormTriple {
    pub mass: RationalMatrix,
    pub kinetic: RationalMatrix,
    pub potential: RationalMatrix,
}

fn assemble(m: u32, degree: u32) -> FormTriple {
    let dim = degree as usize + 1;
    let m64 = m as u64;
    let m128 = m as i128;
    let mut mass = RationalMatrix::zeros(dim);
    let mut kinetic = RationalMatrix::zeros(dim);
    let mut potential = RationalMatrix::zeros(dim);
    let half = Rational::ratio(1, 2);
    let eighth = Rational::ratio(1, 8);
    for j in 0..dim {
        for k in 0..dim {
            let s = (j + k) as u64;
            mass.set(
                j,
                k,
                half.clone() * beta_term(1, m64 + 1, s as i64 + 1),
            );
            let curvature = beta_term(2 * m128 * m128, m64, s as i64 + 1);
            let drift = beta_term(2 * m128 * s as i128, m64 + 1, s as i64);
            let bending = beta_term(4 * (j as i128) * (k as i128), m64 + 2, s as i64 - 1);
            kinetic.set(j, k, half.clone() * (curvature - drift + bending));
            potential.set(
                j,
                k,
                eighth.clone() * beta_term(1, m64 + 2, s as i64 + 1),
            );
        }
    }
    FormTriple {
        mass,
        kinetic,
        potential,
    }
}

type FormCache = Mutex<HashMap<(u32, u32), Arc<FormTriple>>>;

fn cache() -> &'static FormCache {
    static CACHE: OnceLock<FormCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached form triple for mode `m` and basis degree `degree`.
///
/// Unlike [`BasisSpec::new`] this accepts `m = 0`, where the kinetic
/// entry reduces to its bending term; the dispersion-curve sweep relies
/// on that continuation.
pub(crate) fn forms_for(m: u32, degree: u32) -> Arc<FormTriple> {
    let mut guard = cache().lock().expect("form cache poisoned");
    guard
        .entry((m, degree))
        .or_insert_with(|| Arc::new(assemble(m, degree)))
        .clone()
}

pub fn mass_matrix(spec: &BasisSpec) -> RationalMatrix {
    forms_for(spec.m, spec.degree).mass.clone()
}

pub fn kinetic_matrix(spec: &BasisSpec) -> RationalMatrix {
    forms_for(spec.m, spec.degree).kinetic.clone()
}

pub fn potential_matrix(spec: &BasisSpec) -> RationalMatrix {
    forms_for(spec.m, spec.degree).potential.clone()
}

/// Exact value of the shifted quadratic form at field strength `b`:
/// `c^T K c - (m + theta) b c^T M c + b^2 c^T P c`.
///
/// A negative value certifies that the Rayleigh quotient of the trial
/// state lies strictly below `(m + theta) b`, hence below `theta * b`
/// once `m b` is removed by the gauge term in the quotient; the sign is
/// the entire content of a certificate entry.
pub fn form_value(
    c: &RationalVector,
    spec: &BasisSpec,
    b: &Rational,
    theta: &Rational,
) -> Result<Rational> {
    let forms = forms_for(spec.m, spec.degree);
    let kin = forms.kinetic.quad_form(c)?;
    let mass = forms.mass.quad_form(c)?;
    let pot = forms.potential.quad_form(c)?;
    let shift = Rational::from_int(spec.m as i64) + theta.clone();
    Ok(kin - shift * b.clone() * mass + b.clone() * b.clone() * pot)
}

/// Exact squared norm `c^T M c` of a trial state.
pub fn norm_value(c: &RationalVector, spec: &BasisSpec) -> Result<Rational> {
    forms_for(spec.m, spec.degree).mass.quad_form(c)
}

/// Exact `c^T P c`, the leading coefficient of the field quadratic; its
/// positivity makes negativity at two field values certify the whole
/// interval between them.
pub fn potential_value(c: &RationalVector, spec: &BasisSpec) -> Result<Rational> {
    forms_for(spec.m, spec.degree).potential.quad_form(c)
}

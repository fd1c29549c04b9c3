use std::fmt;
use std::ops::{Add, Div, Index, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
///
/// All arithmetic is exact. Values are kept in lowest terms with a positive
/// denominator, so equality and ordering are canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self(BigRational::from_integer(n))
    }

    /// Builds `n/d`. Panics if `d == 0`; intended for literal constants.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Parses a string matching `-?[0-9]+(/[1-9][0-9]*)?`.
    ///
    /// The denominator, when present, must be positive with no leading zero.
    /// The result is reduced to lowest terms.
    pub fn parse(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::ParseRational {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let digits = num_str.strip_prefix('-').unwrap_or(num_str);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fail("numerator must match -?[0-9]+"));
        }
        let numer = BigInt::from_str(num_str).map_err(|_| fail("numerator out of range"))?;
        let denom = match den_str {
            None => BigInt::one(),
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(fail("denominator must match [1-9][0-9]*"));
                }
                if d.starts_with('0') {
                    return Err(fail("denominator must not start with 0"));
                }
                BigInt::from_str(d).map_err(|_| fail("denominator out of range"))?
            }
        };
        Ok(Self(BigRational::new(numer, denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(self.0.pow(exp as i32))
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self(self.0.recip())
    }

    pub fn floor_bigint(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_bigint(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Nearest binary64 value, with ties to even. Values beyond the f64
    /// range map to infinities.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact rational value of a finite f64.
    pub fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(Self)
            .ok_or_else(|| Error::InvalidArgument(format!("{x} is not a finite number")))
    }

    /// Smallest-denominator rational within `eps` of `x`, ties broken
    /// toward the smaller |numerator|.
    pub fn best_approx(x: f64, eps: &Rational) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "best_approx tolerance must be positive, got {eps}"
            )));
        }
        let exact = Self::from_f64(x)?;
        let lo = exact.clone() - eps.clone();
        let hi = exact + eps.clone();
        Ok(simplest_in_interval(&lo, &hi))
    }

    /// Rational upper bound on the square root: the result `s` satisfies
    /// `s * s >= self` and `s * s - self <= slack * max(1, self)`.
    ///
    /// Newton iteration from above: starting at `max(1, self)` every
    /// iterate stays at or above the true root and decreases.
    pub fn sqrt_upper(&self, slack: &Rational) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "sqrt_upper radicand must be nonnegative, got {self}"
            )));
        }
        if !slack.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "sqrt_upper slack must be positive, got {slack}"
            )));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let scale = Self::max_of(Self::one(), self.clone());
        let tol = slack.clone() * scale.clone();
        let mut s = scale;
        loop {
            let excess = s.clone() * s.clone() - self.clone();
            if excess <= tol {
                return Ok(s);
            }
            s = (s.clone() + self.clone() / s) / Self::from_int(2);
        }
    }
}

/// Smallest-denominator rational in the closed interval `[lo, hi]`,
/// ties broken toward the smaller |numerator|.
///
/// Walks the continued-fraction expansion: an interval containing an
/// integer yields the one nearest zero, otherwise the integer part is
/// split off and the reciprocal of the fractional interval is searched.
pub fn simplest_in_interval(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "empty interval");
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_positive(&-hi.clone(), &-lo.clone());
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let mut heads: Vec<BigInt> = Vec::new();
    let tail = loop {
        let c = lo.ceil_bigint();
        if Rational::from_bigint(c.clone()) <= hi {
            break Rational::from_bigint(c);
        }
        let a = lo.floor_bigint();
        let af = Rational::from_bigint(a.clone());
        heads.push(a);
        let next_lo = (hi - af.clone()).recip();
        let next_hi = (lo - af).recip();
        lo = next_lo;
        hi = next_hi;
    };
    heads
        .into_iter()
        .rev()
        .fold(tail, |acc, a| Rational::from_bigint(a) + acc.recip())
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Add for Rational {
    type Output = Rational;

    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;

    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;

    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;

    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational number as a string, e.g. \"-3/40\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        Rational::parse(v).map_err(de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_str(RationalVisitor)
    }
}

/// Dense vector of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![Rational::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self(self.0.iter().map(|x| x.clone() * factor.clone()).collect())
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// Dense square matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact quadratic form `c^T A c`.
    pub fn quad_form(&self, c: &RationalVector) -> Result<Rational> {
        if c.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "quadratic form needs a vector of length {}, got {}",
                self.dim,
                c.len()
            )));
        }
        let mut sum = Rational::zero();
        for i in 0..self.dim {
            if c[i].is_zero() {
                continue;
            }
            let mut row = Rational::zero();
            for j in 0..self.dim {
                if c[j].is_zero() {
                    continue;
                }
                row = row + self.get(i, j).clone() * c[j].clone();
            }
            sum = sum + c[i].clone() * row;
        }
        Ok(sum)
    }

    /// Determinants of the leading principal k-by-k blocks, k = 1..=dim.
    ///
    /// Each block is eliminated independently with partial pivoting, so
    /// singular intermediate blocks are handled correctly.
    pub fn leading_principal_minors(&self) -> Vec<Rational> {
        (1..=self.dim).map(|k| self.block_determinant(k)).collect()
    }

    fn block_determinant(&self, k: usize) -> Rational {
        let mut work: Vec<Vec<Rational>> = (0..k)
            .map(|i| (0..k).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = Rational::one();
        for col in 0..k {
            let pivot_row = match (col..k).find(|&r| !work[r][col].is_zero()) {
                Some(r) => r,
                None => return Rational::zero(),
            };
            if pivot_row != col {
                work.swap(pivot_row, col);
                det = -det;
            }
            let pivot = work[col][col].clone();
            det = det * pivot.clone();
            for row in (col + 1)..k {
                if work[row][col].is_zero() {
                    continue;
                }
                let factor = work[row][col].clone() / pivot.clone();
                for j in col..k {
                    let delta = factor.clone() * work[col][j].clone();
                    work[row][j] = work[row][j].clone() - delta;
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        Rational::parse(s).unwrap()
    }

    #[test]
    fn parse_accepts_grammar() {
        assert_eq!(r("3"), Rational::from_int(3));
        assert_eq!(r("-3"), Rational::from_int(-3));
        assert_eq!(r("0"), Rational::zero());
        assert_eq!(r("-0"), Rational::zero());
        assert_eq!(r("007"), Rational::from_int(7));
        assert_eq!(r("3/4"), Rational::ratio(3, 4));
        assert_eq!(r("-3/4"), Rational::ratio(-3, 4));
        assert_eq!(r("6/4"), Rational::ratio(3, 2));
        assert_eq!(r("5901/10000"), Rational::ratio(5901, 10000));
    }

    #[test]
    fn parse_rejects_out_of_grammar() {
        for bad in [
            "", "-", "/4", "3/", "3/0", "3/04", "3/-4", "1.5", "+3", " 3", "3 ", "--2", "1e3",
            "3//4", "0x10",
        ] {
            assert!(Rational::parse(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(r("8/4").to_string(), "2");
        assert_eq!(r("-8/4").to_string(), "-2");
        assert_eq!(r("6/4").to_string(), "3/2");
        assert_eq!(r("0").to_string(), "0");
        assert_eq!(r("-1/3").to_string(), "-1/3");
    }

    #[test]
    fn ordering_is_by_value() {
        assert!(r("1/3") < r("1/2"));
        assert!(r("-1/2") < r("-1/3"));
        assert!(r("2/6") == r("1/3"));
    }

    #[test]
    fn from_f64_is_exact() {
        assert_eq!(Rational::from_f64(0.5).unwrap(), r("1/2"));
        assert_eq!(Rational::from_f64(-2.25).unwrap(), r("-9/4"));
        assert!(Rational::from_f64(f64::NAN).is_err());
        assert!(Rational::from_f64(f64::INFINITY).is_err());
    }

    #[test]
    fn best_approx_examples() {
        let eps = Rational::ratio(1, 100);
        assert_eq!(Rational::best_approx(0.30203, &eps).unwrap(), r("3/10"));
        assert_eq!(
            Rational::best_approx(std::f64::consts::PI, &eps).unwrap(),
            r("22/7")
        );
        assert_eq!(Rational::best_approx(0.5, &eps).unwrap(), r("1/2"));
        assert_eq!(Rational::best_approx(0.0, &eps).unwrap(), r("0"));
        assert_eq!(
            Rational::best_approx(3.5, &Rational::ratio(1, 2)).unwrap(),
            r("3")
        );
        assert!(Rational::best_approx(1.0, &Rational::zero()).is_err());
        assert!(Rational::best_approx(f64::NAN, &eps).is_err());
    }

    #[test]
    fn simplest_in_interval_examples() {
        let s = |a: &str, b: &str| simplest_in_interval(&r(a), &r(b));
        assert_eq!(s("1/3", "1/2"), r("1/2"));
        assert_eq!(s("2/7", "2/7"), r("2/7"));
        assert_eq!(s("23/10", "47/10"), r("3"));
        assert_eq!(s("-47/10", "-23/10"), r("-3"));
        assert_eq!(s("-1/10", "1/10"), r("0"));
        assert_eq!(s("29/100", "31/100"), r("3/10"));
    }

    #[test]
    fn sqrt_upper_examples() {
        let slack = Rational::ratio(1, 1_000_000);
        assert_eq!(Rational::zero().sqrt_upper(&slack).unwrap(), r("0"));
        let s = Rational::from_int(4).sqrt_upper(&slack).unwrap();
        assert!(s.clone() * s.clone() >= Rational::from_int(4));
        assert!(
            s.clone() * s - Rational::from_int(4) <= slack.clone() * Rational::from_int(4)
        );
        assert!(Rational::from_int(-1).sqrt_upper(&slack).is_err());
        assert!(Rational::from_int(2).sqrt_upper(&Rational::zero()).is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (any::<i32>(), 1u32..=1_000_000)
            .prop_map(|(n, d)| Rational::ratio(n as i64, d as i64))
    }

    fn arb_nonzero_rational() -> impl Strategy<Value = Rational> {
        arb_rational().prop_filter("nonzero", |x| !x.is_zero())
    }

    proptest! {
        #[test]
        fn parse_display_roundtrip(x in arb_rational()) {
            prop_assert_eq!(Rational::parse(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn to_f64_roundtrips_floats(x in -1e12f64..1e12f64) {
            let exact = Rational::from_f64(x).unwrap();
            prop_assert_eq!(exact.to_f64(), x);
        }

        #[test]
        fn addition_is_associative_and_commutative(
            a in arb_rational(), b in arb_rational(), c in arb_rational()
        ) {
            prop_assert_eq!(
                (a.clone() + b.clone()) + c.clone(),
                a.clone() + (b.clone() + c.clone())
            );
            prop_assert_eq!(a.clone() + b.clone(), b + a);
        }

        #[test]
        fn multiplication_distributes(
            a in arb_rational(), b in arb_rational(), c in arb_rational()
        ) {
            prop_assert_eq!(
                a.clone() * (b.clone() + c.clone()),
                a.clone() * b + a * c
            );
        }

        #[test]
        fn additive_and_multiplicative_inverses(a in arb_nonzero_rational()) {
            prop_assert_eq!(a.clone() + (-a.clone()), Rational::zero());
            prop_assert_eq!(a.clone() * a.recip(), Rational::one());
        }

        #[test]
        fn best_approx_is_within_tolerance(x in -3.0f64..3.0) {
            let eps = Rational::ratio(1, 100);
            let approx = Rational::best_approx(x, &eps).unwrap();
            let exact = Rational::from_f64(x).unwrap();
            prop_assert!((exact - approx).abs() <= eps);
        }

        #[test]
        fn best_approx_minimizes_denominator_then_numerator(x in -3.0f64..3.0) {
            let eps = Rational::ratio(1, 100);
            let approx = Rational::best_approx(x, &eps).unwrap();
            let exact = Rational::from_f64(x).unwrap();
            let lo = exact.clone() - eps.clone();
            let hi = exact + eps;
            // Exhaustive scan: for each denominator q below the returned
            // one, [lo, hi] must contain no fraction p/q. The candidates
            // for p form the integer range [ceil(q*lo), floor(q*hi)].
            let q_found = approx.denom().clone();
            let one = num_bigint::BigInt::from(1);
            let mut q = one.clone();
            while q < q_found {
                let qr = Rational::from_bigint(q.clone());
                let p_min = (qr.clone() * lo.clone()).ceil_bigint();
                let p_max = (qr * hi.clone()).floor_bigint();
                prop_assert!(p_min > p_max, "denominator {q} also fits");
                q += &one;
            }
            // At the winning denominator, no admissible numerator is
            // strictly smaller in absolute value.
            let qr = Rational::from_bigint(q_found.clone());
            let p_min = (qr.clone() * lo).ceil_bigint();
            let p_max = (qr * hi).floor_bigint();
            prop_assert!(&p_min <= approx.numer() && approx.numer() <= &p_max);
            let mut candidate = p_min.clone();
            while candidate <= p_max {
                prop_assert!(
                    candidate.magnitude() >= approx.numer().magnitude(),
                    "numerator {candidate} is smaller than {}",
                    approx.numer()
                );
                candidate += &one;
            }
        }

        #[test]
        fn sqrt_upper_postconditions(n in 0u32..1_000_000, d in 1u32..1_000_000) {
            let x = Rational::ratio(n as i64, d as i64);
            let slack = Rational::ratio(1, 1_000_000);
            let s = x.sqrt_upper(&slack).unwrap();
            let excess = s.clone() * s - x.clone();
            prop_assert!(!excess.is_negative());
            prop_assert!(excess <= slack * Rational::max_of(Rational::one(), x));
        }
    }

    #[test]
    fn quad_form_matches_hand_expansion() {
        let mut m = RationalMatrix::zeros(2);
        m.set(0, 0, r("2"));
        m.set(0, 1, r("1/2"));
        m.set(1, 0, r("1/2"));
        m.set(1, 1, r("-3"));
        let c = RationalVector::new(vec![r("1"), r("2")]);
        // 2*1 + 2*(1/2)*2 - 3*4 = -8
        assert_eq!(m.quad_form(&c).unwrap(), r("-8"));
        assert!(m
            .quad_form(&RationalVector::new(vec![r("1")]))
            .is_err());
    }

    #[test]
    fn leading_minors_of_known_matrix() {
        // [[2, 1], [1, 2]] has minors 2, 3.
        let mut m = RationalMatrix::zeros(2);
        m.set(0, 0, r("2"));
        m.set(0, 1, r("1"));
        m.set(1, 0, r("1"));
        m.set(1, 1, r("2"));
        assert_eq!(m.leading_principal_minors(), vec![r("2"), r("3")]);

        // Singular leading block handled via pivoting.
        let mut s = RationalMatrix::zeros(2);
        s.set(0, 0, r("0"));
        s.set(0, 1, r("1"));
        s.set(1, 0, r("1"));
        s.set(1, 1, r("0"));
        assert_eq!(s.leading_principal_minors(), vec![r("0"), r("-1")]);
    }
}

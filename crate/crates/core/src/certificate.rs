use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Rational, RationalVector};

/// Default negativity margin: the certificates establish
/// `lambda_1(b) < theta_star * b` with this rational `theta_star`.
pub fn default_theta_star() -> Rational {
    Rational::ratio(5901, 10000)
}

/// Certified lower bound on the de Gennes constant. A certificate only
/// implies the spectral theorem when its `theta_star` does not exceed
/// this value.
pub fn theta0_certified_lower_bound() -> Rational {
    Rational::ratio(5901, 10000)
}

/// Certified upper bound on the de Gennes constant, used where a safe
/// overestimate of `theta0 * b` is wanted.
pub fn theta0_certified_upper_bound() -> Rational {
    Rational::ratio(5902, 10000)
}

pub const DEFAULT_COVERAGE_TARGET: i64 = 131;
pub const DEFAULT_LARGE_B_THRESHOLD: i64 = 130;

/// One certified field interval: the trial state `coeffs` in mode `m`
/// makes the shifted form strictly negative at both integer endpoints,
/// hence on all of `[b_left, b_right]` by convexity in `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedInterval {
    pub m: u32,
    pub b_left: i64,
    pub b_right: i64,
    pub coeffs: RationalVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_value: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_value: Option<Rational>,
}

/// A complete certificate document.
///
/// Parsing only enforces structure (field types, sortedness, coefficient
/// counts). Whether the intervals actually verify is the checker's job,
/// so a tampered certificate parses fine and then fails verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub theta_star: Rational,
    pub basis_dim: u32,
    pub coverage_target: i64,
    pub large_b_threshold: i64,
    pub complete: bool,
    pub entries: Vec<CertifiedInterval>,
}

impl Certificate {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cert: Certificate =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        cert.validate_structure()?;
        Ok(cert)
    }

    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("certificate serializes");
        out.push('\n');
        out
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_string())?;
        Ok(())
    }

    fn validate_structure(&self) -> Result<()> {
        let want = self.basis_dim as usize + 1;
        let mut last_m = 0u32;
        for entry in &self.entries {
            if entry.m == 0 {
                return Err(Error::Malformed(
                    "entry has angular mode 0; certified modes start at 1".to_string(),
                ));
            }
            if entry.m <= last_m {
                return Err(Error::Malformed(format!(
                    "entries are not strictly increasing in m near m = {}",
                    entry.m
                )));
            }
            last_m = entry.m;
            if entry.coeffs.len() != want {
                return Err(Error::Malformed(format!(
                    "entry m = {} has {} coefficients, basis_dim {} requires {}",
                    entry.m,
                    entry.coeffs.len(),
                    self.basis_dim,
                    want
                )));
            }
        }
        Ok(())
    }
}

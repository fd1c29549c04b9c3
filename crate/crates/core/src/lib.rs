//! Exact certificates for the lowest eigenvalue of the magnetic Neumann
//! Laplacian on the unit disk.
//!
//! The crate produces and verifies rational negativity certificates for
//! Galerkin trial states, proving `lambda_1(b) < theta_star * b` on
//! integer field intervals, and complements them with an exact
//! perturbation-series bound that covers all sufficiently large fields.

pub mod branch;
pub mod certificate;
pub mod certifier;
pub mod checker;
pub mod cli;
pub mod degennes;
pub mod eigen;
pub mod error;
pub mod galerkin;
pub mod largeb;
pub mod rational;

pub use error::{Error, Result};
pub use rational::{Rational, RationalMatrix, RationalVector};

//! Command-line surface.
//!
//! Exit codes follow one rule everywhere: 0 means verified, 1 means a
//! verification or tolerance failure, 2 means malformed input (bad
//! flags, unreadable files, unparsable rationals). The two failure
//! kinds are never conflated: a certificate that parses but fails its
//! checks is a 1, a certificate that does not parse is a 2.

use std::fs::File;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::branch;
use crate::certificate::Certificate;
use crate::certifier::certify_range;
use crate::checker::{check_certificate, is_malformed};
use crate::degennes::{self, Grid};
use crate::error::{Error, Result};
use crate::largeb::{
    b0_upper_bound, coefficient_bounds, verify_large_b, RationalInterval, SpectralConstants,
};
use crate::rational::Rational;

const EXIT_VERIFIED: i32 = 0;
const EXIT_FAILED: i32 = 1;
const EXIT_MALFORMED: i32 = 2;

#[derive(Parser)]
#[command(
    name = "diskcert",
    version,
    about = "Certificates for the ground-state eigenvalue of the magnetic Neumann Laplacian on the unit disk"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an exact certificate over a range of angular modes.
    Certify {
        /// First angular mode to certify.
        #[arg(long, default_value_t = 1)]
        m_lo: u32,
        /// Last angular mode to certify.
        #[arg(long, default_value_t = 56)]
        m_hi: u32,
        /// Polynomial degree of the trial space.
        #[arg(long, default_value_t = 8)]
        terms: u32,
        /// Slope of the line to certify against, as a rational.
        #[arg(long, default_value = "5901/10000")]
        theta_star: String,
        /// Output path for the certificate JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a certificate file with exact arithmetic.
    Check {
        /// Certificate JSON to verify.
        #[arg(long)]
        cert: PathBuf,
        /// Override the coverage target stored in the certificate.
        #[arg(long)]
        target: Option<i64>,
    },
    /// Verify the large-field crossover bound from exact enclosures.
    Largeb {
        /// Field strength the crossover bound must stay below.
        #[arg(long, default_value_t = 130)]
        threshold: i64,
        /// Override the branch-minimum enclosure, as "lo..hi".
        #[arg(long)]
        theta0: Option<String>,
        /// Override the minimizer enclosure, as "lo..hi".
        #[arg(long)]
        xi0: Option<String>,
        /// Override the boundary-coupling enclosure, as "lo..hi".
        #[arg(long)]
        c1: Option<String>,
    },
    /// Verify the full statement: certificate, large-field bound, overlap.
    Theorem {
        /// Certificate JSON covering the small-field range.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Recompute the spectral constants by finite differences.
    Degennes {
        /// Number of grid points.
        #[arg(long, default_value_t = 20_000)]
        grid_points: usize,
        /// Truncation point of the half line.
        #[arg(long, default_value_t = 12.0)]
        cutoff: f64,
    },
    /// Sweep the dispersion-curve envelope and emit CSV.
    Curves {
        /// Largest integer field strength to sample.
        #[arg(long, default_value_t = 140)]
        b_max: u32,
        /// Polynomial degree of the trial space.
        #[arg(long, default_value_t = branch::SWEEP_DEGREE)]
        terms: u32,
        /// Output path for the CSV; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(err: &Error) -> i32 {
    if is_malformed(err) || matches!(err, Error::InvalidArgument(_)) {
        EXIT_MALFORMED
    } else {
        EXIT_FAILED
    }
}

fn report(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}

/// Parses and runs the process arguments, returning the exit code.
pub fn run() -> i32 {
    match Cli::parse().command {
        Command::Certify {
            m_lo,
            m_hi,
            terms,
            theta_star,
            out,
        } => cmd_certify(m_lo, m_hi, terms, &theta_star, &out),
        Command::Check { cert, target } => cmd_check(&cert, target),
        Command::Largeb {
            threshold,
            theta0,
            xi0,
            c1,
        } => cmd_largeb(threshold, theta0.as_deref(), xi0.as_deref(), c1.as_deref()),
        Command::Theorem { cert } => cmd_theorem(&cert),
        Command::Degennes {
            grid_points,
            cutoff,
        } => cmd_degennes(grid_points, cutoff),
        Command::Curves { b_max, terms, out } => cmd_curves(b_max, terms, out.as_deref()),
    }
    .unwrap_or_else(|err| report(&err))
}

/// Optional fan-out cap from the environment.
fn jobs_from_env() -> Result<Option<usize>> {
    match std::env::var("DISK_CERT_JOBS") {
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                Error::InvalidArgument(format!("DISK_CERT_JOBS must be a positive integer, got {raw:?}"))
            })?;
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "DISK_CERT_JOBS must be a positive integer, got 0".to_string(),
                ));
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

fn cmd_certify(m_lo: u32, m_hi: u32, terms: u32, theta_star: &str, out: &Path) -> Result<i32> {
    let theta = Rational::parse(theta_star)?;
    if !theta.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "certification line slope must be positive, got {theta}"
        )));
    }
    let outcome = certify_range(m_lo, m_hi, terms, &theta, jobs_from_env()?)?;
    outcome.certificate.write_file(out)?;
    for (m, err) in &outcome.failures {
        println!("m = {m}: FAILED ({err})");
    }
    let cert = &outcome.certificate;
    println!(
        "wrote {} with {} intervals, complete: {}",
        out.display(),
        cert.entries.len(),
        cert.complete
    );
    Ok(if cert.complete { EXIT_VERIFIED } else { EXIT_FAILED })
}

fn cmd_check(cert_path: &Path, target: Option<i64>) -> Result<i32> {
    let mut cert = Certificate::read_file(cert_path)?;
    if let Some(t) = target {
        cert.coverage_target = t;
    }
    let report = check_certificate(&cert);
    println!("{}", report.summary());
    Ok(if report.overall() {
        EXIT_VERIFIED
    } else {
        EXIT_FAILED
    })
}

fn parse_interval(label: &str, raw: Option<&str>, default: RationalInterval) -> Result<RationalInterval> {
    let Some(text) = raw else {
        return Ok(default);
    };
    let (lo, hi) = text.split_once("..").ok_or_else(|| {
        Error::InvalidArgument(format!("{label} must look like \"lo..hi\", got {text:?}"))
    })?;
    RationalInterval::new(Rational::parse(lo.trim())?, Rational::parse(hi.trim())?)
}

fn cmd_largeb(
    threshold: i64,
    theta0: Option<&str>,
    xi0: Option<&str>,
    c1: Option<&str>,
) -> Result<i32> {
    let defaults = SpectralConstants::defaults();
    let constants = SpectralConstants::new(
        parse_interval("theta0", theta0, defaults.theta0.clone())?,
        parse_interval("xi0", xi0, defaults.xi0.clone())?,
        parse_interval("c1", c1, defaults.c1.clone())?,
    )?;
    let coeffs = coefficient_bounds(&constants)?;
    let bound = b0_upper_bound(&coeffs);
    println!("A lower bound:  {}", coeffs.a_low);
    println!("B upper bound:  {}", coeffs.b_high);
    println!("C upper bound:  {}", coeffs.c_high);
    println!("crossover bound b0 <= {bound} ({:.4})", bound.to_f64());
    let pass = verify_large_b(&constants, threshold)?;
    println!(
        "eigenvalue stays below the line for b > {threshold}: {}",
        if pass { "VERIFIED" } else { "NOT VERIFIED" }
    );
    Ok(if pass { EXIT_VERIFIED } else { EXIT_FAILED })
}

fn cmd_theorem(cert_path: &Path) -> Result<i32> {
    let cert = Certificate::read_file(cert_path)?;
    let report = check_certificate(&cert);
    let small_field = report.overall();
    println!(
        "small field (0, {}]: {}",
        cert.coverage_target,
        if small_field { "VERIFIED" } else { "NOT VERIFIED" }
    );
    let large_field = verify_large_b(&SpectralConstants::defaults(), cert.large_b_threshold)?;
    println!(
        "large field b > {}: {}",
        cert.large_b_threshold,
        if large_field { "VERIFIED" } else { "NOT VERIFIED" }
    );
    let overlap = cert.coverage_target > cert.large_b_threshold;
    println!(
        "ranges overlap ({} > {}): {}",
        cert.coverage_target,
        cert.large_b_threshold,
        if overlap { "YES" } else { "NO" }
    );
    let pass = small_field && large_field && overlap;
    println!(
        "theorem for all b > 0: {}",
        if pass { "VERIFIED" } else { "NOT VERIFIED" }
    );
    Ok(if pass { EXIT_VERIFIED } else { EXIT_FAILED })
}

fn cmd_degennes(grid_points: usize, cutoff: f64) -> Result<i32> {
    let grid = Grid {
        cutoff,
        points: grid_points,
    };
    let result = degennes::solve(&grid)?;
    println!("theta0 = {:.9}", result.theta0);
    println!("xi0    = {:.9}", result.xi0);
    println!("phi0   = {:.9}", result.phi0);
    println!("c1     = {:.9}", result.c1);
    for (k, moment) in result.moments.iter().enumerate() {
        println!("moment t^{} = {:.9}", k + 1, moment);
    }
    let mut pass = true;
    for line in degennes::reference_checks(&result) {
        let ok = line.pass();
        pass &= ok;
        println!(
            "{}: {:.9} vs {:.9} within {:.0e}: {}",
            line.name,
            line.got,
            line.want,
            line.tolerance,
            if ok { "ok" } else { "FAILED" }
        );
    }
    Ok(if pass { EXIT_VERIFIED } else { EXIT_FAILED })
}

fn cmd_curves(b_max: u32, terms: u32, out: Option<&Path>) -> Result<i32> {
    let grid: Vec<f64> = (1..=b_max).map(f64::from).collect();
    let points = branch::sweep(&grid, terms)?;
    match out {
        Some(path) => {
            let file = File::create(path)?;
            branch::write_csv(&points, file)?;
        }
        None => {
            let stdout = io::stdout();
            branch::write_csv(&points, stdout.lock())?;
        }
    }
    Ok(EXIT_VERIFIED)
}

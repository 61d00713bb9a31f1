use std::path::PathBuf;

use num_complex::Complex64;

/// Errors raised by the scattering pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid shape: {0}")]
    GridShape(String),

    #[error("pole of {what} at {at}")]
    Pole { what: &'static str, at: Complex64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(
        "potential does not decay on [{x_min}, {x_max}]: tail magnitude {tail:.3e} exceeds {tol:.1e}"
    )]
    Decay {
        x_min: f64,
        x_max: f64,
        tail: f64,
        tol: f64,
    },

    #[error("seed solution {which} nearly vanishes (|{which}| = {min_abs:.3e} at x = {x})")]
    NonvanishingAssumptionViolated {
        which: &'static str,
        min_abs: f64,
        x: f64,
    },

    #[error("seed integration residual {residual:.3e} exceeds {tol:.1e}")]
    SolverDivergence { residual: f64, tol: f64 },

    #[error("intermediate magnitude {magnitude:.3e} in {family} recurrence at n = {n}")]
    Overflow {
        family: &'static str,
        n: usize,
        magnitude: f64,
    },

    #[error("spectral parameter {rho} lies outside the domain of {family}")]
    Domain { family: &'static str, rho: Complex64 },

    #[error("polynomial degree {degree} exceeds the root-finding cap {cap}")]
    RootCap { degree: usize, cap: usize },

    #[error("norming constant quotient degenerates at rho = {rho}")]
    DegenerateQuotient { rho: Complex64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("least-squares matrix is rank deficient at x = {x}: rank {rank} < {columns}")]
    RankDeficiency { x: f64, rank: usize, columns: usize },

    #[error("denominator of the {which} recovery formula vanishes at x = {x} (|value| = {value:.3e})")]
    DegenerateDenominator {
        which: &'static str,
        x: f64,
        value: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

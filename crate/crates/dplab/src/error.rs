//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a formula (e.g. a pole of λ_j).
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation point on or too close to a singular set.
    #[error("singular point: {0}")]
    Singular(String),
    /// Space-time point outside the configured transition zone.
    #[error("zone violation: {0}")]
    Zone(String),
    /// Stokes-data or other structural constraint violated.
    #[error("constraint violated: {0}")]
    Constraint(String),
    /// Discretisation cannot resolve the problem (conditioning, step underflow).
    #[error("resolution error: {0}")]
    Resolution(String),
    /// Two routes to the same quantity disagree.
    #[error("inconsistency: {0}")]
    Inconsistent(String),
    /// Positivity or stability loss during time stepping.
    #[error("integration aborted at t = {time}: {reason}")]
    Aborted { time: f64, reason: String },
    /// Malformed configuration or input file.
    #[error("invalid input: {0}")]
    Input(String),
    /// Filesystem failure while writing reports.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

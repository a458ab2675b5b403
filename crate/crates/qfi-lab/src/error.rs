//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by probe construction, QFIM computation, measurement
/// simulation, and optimization.
#[derive(Debug, Error)]
pub enum Error {
    #[error("number of qubits must be at least 1")]
    ZeroQubits,

    #[error("number of qubits {0} exceeds the supported maximum {max}", max = crate::state::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("amplitude count {got} does not match 2^{qubits}")]
    BadAmplitudeCount { qubits: usize, got: usize },

    #[error("state norm {0} deviates from 1 beyond tolerance")]
    NotNormalized(f64),

    #[error("vector norm {0} is too small to normalize")]
    DegenerateVector(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("phase angle {0} is not finite")]
    NonFiniteAngle(f64),

    #[error("parameter {name} = {value} outside valid range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("directions are not orthogonal: |w.v| = {0}")]
    NotOrthogonal(f64),

    #[error("basis vector e_{0} is parallel to the sensing direction")]
    ParallelDirection(usize),

    #[error("matrix is not a valid QFIM: {0}")]
    InvalidQfim(String),

    #[error("state is not equatorial: max |<Z_j>| = {0}")]
    NotEquatorial(f64),

    #[error("QFI along the requested direction is zero; the Cramer-Rao bound is undefined")]
    ZeroQfi,

    #[error("operating point outside the estimator's invertible window: {0}")]
    OutsideWindow(String),

    #[error("no measurement outcomes recorded")]
    EmptyCounts,

    #[error(
        "outcome probability {prob} is degenerate but its derivative {deriv} is not negligible"
    )]
    DegenerateOutcome { prob: f64, deriv: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed document: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: usage and configuration problems exit
    /// with 2, verification and invariant failures with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ZeroQubits
            | Error::TooManyQubits(_)
            | Error::BadAmplitudeCount { .. }
            | Error::NotNormalized(_)
            | Error::DegenerateVector(_)
            | Error::DimensionMismatch(_, _)
            | Error::NonFiniteAngle(_)
            | Error::OutOfRange { .. }
            | Error::NotOrthogonal(_)
            | Error::ParallelDirection(_)
            | Error::NotEquatorial(_)
            | Error::OutsideWindow(_)
            | Error::EmptyCounts
            | Error::Config(_)
            | Error::Parse(_)
            | Error::Io(_) => 2,
            Error::InvalidQfim(_)
            | Error::ZeroQfi
            | Error::DegenerateOutcome { .. }
            | Error::InvariantViolation(_) => 1,
        }
    }
}

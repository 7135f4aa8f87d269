use thiserror::Error;

use crate::detect::Witness;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("times and values differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },

    #[error("times not strictly increasing at index {index}")]
    NotIncreasing { index: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid window [{start}, {end}]")]
    InvalidWindow { start: f64, end: f64 },

    #[error("window [{start}, {end}] contains fewer than {needed} grid points")]
    EmptyWindow { start: f64, end: f64, needed: usize },

    #[error("delta must be positive, got {0}")]
    InvalidDelta(f64),

    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("step must be positive, got {0}")]
    InvalidStep(f64),

    #[error("unknown gallery function `{0}`")]
    UnknownKind(String),

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("grids differ")]
    GridMismatch,

    #[error("missing channel `{0}`")]
    MissingChannel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("certificate invalid: |f({t}) - f({s})| = {gap} is not below the bound")]
    CertificateInvalid { s: f64, t: f64, gap: f64 },

    #[error("grid step {step} too coarse for delta {delta} (need step <= delta/4)")]
    GridTooCoarse { step: f64, delta: f64 },

    #[error("stage {stage}: no asymptotic-uniformity certificate in the window")]
    NoCertificate {
        stage: usize,
        witness: Option<Witness>,
    },

    #[error("window [{start}, {end}] outside the approximant domain [{domain_start}, {domain_end}]")]
    OutsideDomain {
        start: f64,
        end: f64,
        domain_start: f64,
        domain_end: f64,
    },

    #[error("elimination level {level} out of range for {terms} terms")]
    LevelOutOfRange { level: usize, terms: usize },

    #[error("evaluation at {0} is not representable")]
    NotRepresentable(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

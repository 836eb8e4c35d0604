//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by fingerprint, distribution, decoding, and file operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Two vectors that must share a bit length do not.
    #[error("dimension mismatch: expected {expected} bits, got {got}{}", fmt_index(.index))]
    Dimension {
        expected: usize,
        got: usize,
        /// Offending position in a batch operation, when applicable.
        index: Option<usize>,
    },

    #[error("fingerprint length must be at least 1")]
    EmptyFingerprint,

    #[error("soft prediction score {value} at position {index} is outside [0, 1]")]
    ScoreOutOfRange { index: usize, value: f64 },

    #[error("cannot parse fingerprint literal {literal:?}: {reason}")]
    BadLiteral { literal: String, reason: String },

    #[error("candidate set must be nonempty")]
    EmptyCandidateSet,

    #[error("probability at index {index} is {value}, which is not a finite nonnegative number")]
    BadProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, outside the accepted tolerance of 1e-6 around 1")]
    BadProbabilitySum { sum: f64 },

    #[error("similarity band requires at least 2 candidates, got {len}")]
    BandUndefined { len: usize },

    #[error("{metric} is not a similarity metric eligible for band computation (pass the override to force it)")]
    MetricNotBandEligible { metric: &'static str },

    #[error("candidate index {index} out of range for a set of {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("full-hypercube search requires m <= {max}, got m = {m}")]
    SearchSpaceTooLarge { m: usize, max: usize },

    #[error("k = {k} out of range [1, {len}]")]
    KOutOfRange { k: usize, len: usize },

    #[error("candidate {index} is the zero vector but has probability {prob} > 0; the closed-form cosine decoder requires nonzero support")]
    ZeroVectorSupport { index: usize, prob: f64 },

    #[error("band is degenerate (sigma_max >= 1 - 1e-12); the agreement condition is undefined")]
    DegenerateBand,

    #[error("infeasible construction parameters: {0}")]
    InfeasibleConstruction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("true fingerprint has no set bits; cosine loss is undefined")]
    ZeroTruth,

    #[error("score {value} at position {index} is within {step} of the [0,1] boundary; central differences would leave the domain")]
    StepTooLarge { index: usize, value: f64, step: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_index(index: &Option<usize>) -> String {
    match index {
        Some(i) => format!(" at index {i}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

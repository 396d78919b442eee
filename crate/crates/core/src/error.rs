use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while reading and validating trial data.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing required column `{0}` in header")]
    MissingColumn(&'static str),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("non-uniform assignment in cluster `{cluster}` (line {line})")]
    NonUniformAssignment { cluster: String, line: u64 },
    #[error("trial has {treated} treated clusters out of {total}; both arms must be non-empty")]
    EmptyArm { treated: usize, total: usize },
    #[error("no data rows")]
    Empty,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Errors raised by the estimators and confidence-region routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimationError {
    #[error("compliance difference is zero (|denominator| = {denominator:e}); the effect is not identified")]
    ZeroDenominator { denominator: f64 },
    #[error("first-stage fitted values are constant; compliance difference is zero")]
    RankDeficientFirstStage,
    #[error("variance is degenerate: {0}")]
    DegenerateVariance(String),
    #[error("arm has {size} clusters; at least 2 per arm are required")]
    DegenerateArm { size: usize },
    #[error("C({clusters},{treated}) = {count} assignments exceeds the enumeration cap {cap}; use Monte Carlo mode")]
    CapExceeded {
        clusters: usize,
        treated: usize,
        count: u128,
        cap: u128,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Errors raised by the identification analytics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentificationError {
    #[error("population has no compliers")]
    NoCompliers,
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

/// Errors raised by the simulation engine.
#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("size/compliance table is empty")]
    EmptyPiSource,
    #[error("intraclass correlation must lie in [0, 1), got {0}")]
    InvalidLambda(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

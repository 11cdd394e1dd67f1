// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Fock dimension {0}: need at least 2")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid model parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("model validity bound violated: {bound} (value {value:.3e}, limit {limit:.3e})")]
    ModelValidity {
        bound: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("no unique steady state: total decay rate is zero")]
    NoUniqueSteadyState,

    #[error("stationary manifold has dimension {0}, expected 1")]
    SteadyStateMultiplicity(usize),

    #[error("RK4 step {dt:.3e} exceeds the stability bound {limit:.3e}")]
    StepSize { dt: f64, limit: f64 },

    #[error("basis mismatch: expected {expected} basis")]
    BasisMismatch { expected: &'static str },

    #[error("singular denominator for transition ({m}, {n})")]
    SingularDenominator { m: usize, n: usize },

    #[error("singular harmonic-balance system (pivot ratio {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("input operator is not Hermitian (asymmetry {0:.3e})")]
    NonHermitian(f64),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("configuration error in {field}: {reason}")]
    Config { field: String, reason: String },

    #[error("refusing to overwrite {path}: {reason} (use --force)")]
    Overwrite { path: String, reason: String },

    #[error("{context}: {source}")]
    AtPoint {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Wraps a solver failure with the sweep coordinates where it happened.
    pub fn at(self, context: impl Into<String>) -> Self {
        Error::AtPoint {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by user input rather than the numerics.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::Config { .. } | Error::Overwrite { .. } | Error::Json(_) => true,
            Error::InvalidParameter { .. } | Error::ModelValidity { .. } => true,
            Error::AtPoint { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

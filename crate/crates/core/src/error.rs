//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by construction and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Unsupported family/rank combination or malformed construction input.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller violated an operation precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// A numerical input left the admissible domain (e.g. nonpositive metric weight).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two redundant computation paths disagreed beyond tolerance.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// A truncated series or iteration failed to reach the requested accuracy.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// A search (bisection bracket, event detection) could not locate its target.
    #[error("search error: {0}")]
    Search(String),

    /// A requested feasibility interval is empty.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A conjugate-point witness failed its defining inequality.
    #[error("witness failure: index value {value} is not negative")]
    WitnessFailure {
        /// The offending index-form value.
        value: f64,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

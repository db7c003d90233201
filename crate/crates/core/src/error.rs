use thiserror::Error;

/// Errors raised by generators, analyses and experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A finite resource (chain length, term budget, breakpoint cap) is exhausted.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A generator or set specification violates its invariants.
    #[error("invalid specification: {0}")]
    Specification(String),

    /// An index lies outside the window it refers to.
    #[error("index {index} outside window of length {len}")]
    Range { index: u64, len: usize },

    /// A function is not defined (non-finite) on the values it was applied to.
    #[error("function undefined on input {0}")]
    Domain(f64),

    /// A finite window cannot support the requested diagnostic.
    #[error("diagnostic precondition failed: {0}")]
    Diagnostic(String),

    /// Zero dispersion where a positive one is required.
    #[error("degenerate input: {0} has zero dispersion")]
    Degenerate(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// An experiment gate rejected its inputs.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// No ladder level of a polyadic point is fine enough for the requested accuracy.
    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),

    /// Weak continuity search exhausted the ladder.
    #[error("no ladder level meets the exceptional budget (best level {best_level}, fraction {best_fraction})")]
    WeakContinuity { best_level: u64, best_fraction: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

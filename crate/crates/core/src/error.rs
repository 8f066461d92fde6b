//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An instance index `t` does not fit in the requested bit width.
    #[error("t = {t} is out of range for width k = {k} (need t < 2^k)")]
    TOutOfRange { t: u64, k: u32 },

    /// A bit width outside what the operation supports.
    #[error("width k = {k} is out of range ({reason})")]
    KOutOfRange { k: u32, reason: &'static str },

    /// The 2-valuation of zero does not exist.
    #[error("the 2-valuation of 0 is undefined")]
    TwoValuationOfZero,

    /// A table built for one level was queried at another.
    #[error("level mismatch: tables hold level {table_k}, operation needs level {requested_k}")]
    LevelMismatch { table_k: u32, requested_k: u32 },

    /// Building the next level (or running an enumeration) would exceed the
    /// configured memory budget.
    #[error("estimated {needed} bytes exceeds the memory budget of {budget} bytes (reached k = {k}); raise --memory-budget to continue")]
    MemoryBudget { needed: u64, budget: u64, k: u32 },

    #[error("epsilon must lie strictly between 0 and 1/2, got {0}")]
    EpsilonOutOfRange(f64),

    /// A t value outside an operation's stated range.
    #[error("t = {t} is outside the operation's range ({requirement})")]
    TRangeRejected { t: u64, requirement: &'static str },

    /// Density stabilization did not occur below the supported width.
    #[error("normalized counts for t = {t} did not stabilize below width {limit}")]
    StabilizationLimit { t: u64, limit: u32 },

    /// Series division needs a unit (nonzero constant term) denominator.
    #[error("series division by a non-unit (zero constant term)")]
    NonUnitDivisor,

    /// A coefficient expected to be an integer was not.
    #[error("coefficient at {at} is not an integer: {value}")]
    NonIntegerCoefficient { at: String, value: String },

    /// Two series with different variable sets or truncation bounds were combined.
    #[error("incompatible series shapes: {0} vs {1}")]
    ShapeMismatch(String, String),

    /// A coefficient index lies outside the truncation bounds.
    #[error("exponent {at} exceeds the truncation bounds {bounds}")]
    TruncationExceeded { at: String, bounds: String },
}

pub type Result<T> = std::result::Result<T, Error>;

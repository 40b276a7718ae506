use thiserror::Error;

use crate::VertexId;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates an operation's precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    /// A ball or degree query reached a lazily provided vertex that has not
    /// been materialized yet.
    #[error("vertex {0} has not been materialized")]
    Unmaterialized(VertexId),

    /// A lazy provider would exceed its materialization cap.
    #[error("materialization cap of {cap} vertices exceeded")]
    MaterializationCap { cap: usize },

    /// A computation would exceed its configured step or enumeration budget.
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u64,
        budget: u64,
    },

    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(u32, u32),

    #[error("empty measure")]
    EmptyMeasure,

    /// A structural invariant failed an audit. Never expected in a correct run.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Checks `0 <= p <= 1`.
pub(crate) fn check_unit(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(name, format!("{p} is not in [0, 1]")))
    }
}

/// Checks `0 < p <= 1`, the admissible range of the leaf-creation probability.
pub(crate) fn check_growth_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(invalid("p", format!("{p} is not in (0, 1]")))
    }
}

//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by arithmetic, lattice, and integration routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A decision needed more p-adic digits than the operands carry.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    /// Division by an exact or inexact zero.
    #[error("division by zero")]
    DivisionByZero,
    /// Operands live over different primes.
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    /// A parameter violates the documented preconditions.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The element is not in the group or order required by the operation.
    #[error("not a member: {0}")]
    NotMember(String),
    /// A cyclotomic conductor above the configured bound.
    #[error("conductor {0} exceeds the bound {1}")]
    ConductorOverflow(u64, u64),
    /// The level-M and level-(M+1) sums never agreed within the escalation budget.
    #[error("stability not reached up to level {0}")]
    Unstable(u32),
    /// A quantity that the mathematics forces to hold was violated.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Result alias with the crate error type.
pub type Result<T> = std::result::Result<T, Error>;

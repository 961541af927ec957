//! Exact verification engine for Shalika models of three families of minimax
//! supercuspidal representations of `GL(4, Q_p)`.
//!
//! The crate builds the simple, middle and biquadratic families from their
//! simple strata, evaluates their explicit Whittaker functions by solving
//! linear congruences over `Z_p`, sums the twisted Shalika period as a finite
//! exact sum in a cyclotomic field, and compares the resulting verdicts with
//! closed-form criteria.

pub mod arith;
pub mod error;
pub mod lattice;
pub mod shalika;
pub mod strata;
pub mod verdict;

pub use error::{Error, Result};

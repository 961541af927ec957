//! Exact arithmetic: truncated p-adic numbers, finite fields with characters,
//! the additive character of `Q_p`, tame characters, and cyclotomic numbers.

pub mod cyclo;
pub mod ff;
pub mod padic;
pub mod psi;
pub mod tame;

pub use cyclo::{CycNum, Root};
pub use ff::{char_eval, FFElem, FiniteField, MultChar};
pub use padic::{max_precision, PAdicNum};
pub use psi::{psi_f, psi_f_cyc, teichmuller};
pub use tame::{tame_eval, TameChar};

//! The simple, middle and biquadratic families: strata, types, Whittaker and
//! Bessel functions, and the closed-form decompositions used in the period
//! computations.

pub mod family;
pub mod proof;
pub mod sampling;
pub mod whittaker;

pub use family::{Family, FamilyKind, FamilyParams, FamilySpec, TwistSpec};
pub use whittaker::{
    bessel_value, j_membership, lambda_eval, psi4, whittaker_root, whittaker_value, whittaker_witness,
    TypeDecomposition, Witness,
};
pub use proof::{verify_proof_decomposition, ProofCase, ProofParams};

//! The twisted Shalika period as a finite exact sum over coset points, its
//! partial sums `T_k`, stability across levels, and support scans.

pub mod cosets;
pub mod period;

pub use cosets::{h_reduction, h_transversal, x_invariance_level, CosetPoint, HReduction};
pub use period::{
    lambda0, lambda_s0_sign, period_escalating, period_report, period_sums, stability_check, support_scan,
    IntegralConfig, IntegralReport, PeriodSums, RWeight, SupportReport,
};

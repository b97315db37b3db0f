//! Exact integer linear algebra and the finite-level K-theory checks.

mod matrix;
mod report;
mod snf;

pub use matrix::IntMatrix;
pub use report::{
    k0_quotient_report, ktheory_report, pv_window_check, K0Report, KTheoryReport, PvReport, KTHEORY_CLAIM,
};
pub use snf::{cokernel, invariant_factors, kernel_rank, smith_normal_form, AbGroupPresentation, SnfResult};

//! Ideal counting, Dedekind zeta partial sums, induced masses and the
//! window-level induction/restriction identity.

mod number_field;
mod window;
mod zeta;

pub use number_field::{kronecker, splitting_data, NumberFieldSpec, PrimeData, Splitting, SUPPORTED_QUADRATIC};
pub use window::{geometric_window_sum, induce, induce_restrict_roundtrip, saturate, RoundtripReport, WindowMeasure};
pub use zeta::{
    divergence_witness, ideal_count_coeffs, induced_partition, zeta_partial, DirichletSeriesPartial, InducedMass,
    ZetaPartial, DIVERGENCE_GUARD,
};

//! The (p,q) iteration for scalars and matrices.

mod baseline;
mod matrix;
mod params;
mod scalar;

pub use baseline::{altman_step, bini_step, binomial_form_step, defining_form_step, newton_schulz_step};
pub use matrix::{
    advance, check_commutation, initial_iterate, matrix_invroot, matrix_step, pan_reif_init, residual,
    IterationReport, COMMUTATION_TOLERANCE, MATRIX_DIVERGENCE_BOUND,
};
pub use params::{mult_count, InitPolicy, IterationParams, StopCriterion};
pub use scalar::{scalar_invroot, scalar_residual, scalar_step, Outcome, ScalarReport, SCALAR_DIVERGENCE_BOUND};

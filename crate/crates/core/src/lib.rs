//! Inverse principal p-th roots of symmetric positive definite matrices by
//! the (p,q) residual-power iteration
//!
//! ```text
//! B_{k+1} = (1/p) B_k (p I + R_k + R_k^2 + ... + R_k^{q-1}),   R_k = I - A B_k^p
//! ```
//!
//! which contains Newton–Schulz (p=1, q=2), Bini's iteration (q=2) and
//! Altman's hyperpower method (p=1) as special cases.
//!
//! Everything numerical is generic over [`Real`]; the aliases below fix the
//! scalar to `f64`.

pub mod convergence;
pub mod error;
pub mod harness;
pub mod iteration;
pub mod linalg;
pub mod matgen;
pub mod real;

pub use error::{Error, Result};
pub use real::Real;
pub use twofloat::TwoFloat;

pub use convergence::{
    corrected_condition_c, estimate_order, optimal_q_search, paper_condition_c, residual_map,
    stability_scan_max_p, stability_scan_max_q, QSearch, QSearchRow, QTarget, ScanBound,
    StabilityTable,
};
pub use iteration::{
    altman_step, bini_step, matrix_invroot, matrix_step, newton_schulz_step, pan_reif_init,
    scalar_invroot, InitPolicy, IterationParams, IterationReport, Outcome, ScalarReport,
    StopCriterion,
};
pub use linalg::{
    eigenvalues, inverse_pth_root, jacobi_eigh, mat_mul, norm_two_sym, spectral_function,
    tridiagonal_eigh, EigenDecomposition, Matrix, MultLedger, SymMatrix,
};
pub use matgen::{generate_spd, measure, MatrixSpec, Measurement};

pub type Mat = Matrix<f64>;
pub type SymMat = SymMatrix<f64>;
pub type Eigen = EigenDecomposition<f64>;
pub type Params = IterationParams<f64>;
pub type Report = IterationReport<f64>;

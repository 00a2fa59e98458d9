//! Convergence conditions, stability scans, order estimation and q search.

mod order;
mod residual;
mod search;
mod stability;

pub use order::{estimate_order, ORDER_FIT_POINTS};
pub use residual::{
    corrected_condition_c, corrected_h, initial_residual_spectrum, paper_condition_c, paper_g, residual_map,
};
pub use search::{optimal_q_search, QSearch, QSearchRow, QTarget};
pub use stability::{
    is_stable, stability_scan_max_p, stability_scan_max_q, ScanBound, StabilityTable, DEFAULT_GRID_STEP,
    DEFAULT_P_CAP, DEFAULT_Q_CAP,
};

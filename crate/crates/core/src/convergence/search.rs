use std::ops::RangeInclusive;

use crate::error::{invalid, Error, Result};
use crate::iteration::{matrix_invroot, scalar_invroot, IterationParams};
use crate::linalg::SymMatrix;
use crate::real::Real;

/// What to run for each `q`.
#[derive(Debug, Clone, Copy)]
pub enum QTarget<'a, T> {
    Matrix(&'a SymMatrix<T>),
    /// Means over the converged members.
    Ensemble(&'a [SymMatrix<T>]),
    Scalar { lambda: T, b0: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QSearchRow {
    pub q: u32,
    pub mean_iterations: f64,
    pub mean_mults: f64,
    pub converged: usize,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QSearch {
    pub q_best: u32,
    pub rows: Vec<QSearchRow>,
}

impl QSearch {
    pub fn best(&self) -> &QSearchRow {
        self.rows.iter().find(|r| r.q == self.q_best).expect("best row present")
    }
}

/// Runs every `q` in `q_range` and picks the one with the fewest mean
/// products, breaking ties by mean iterations and then by smaller `q`.
/// The `p` and `q` of `params` are overridden.
pub fn optimal_q_search<T: Real>(
    target: QTarget<'_, T>,
    p: u32,
    q_range: RangeInclusive<u32>,
    params: &IterationParams<T>,
) -> Result<QSearch> {
    if *q_range.start() < 2 || *q_range.end() > 12 || q_range.is_empty() {
        return Err(invalid(format!("q range must lie in 2..=12, got {q_range:?}")));
    }
    let mut rows = Vec::new();
    for q in q_range {
        let run = IterationParams { p, q, ..params.clone() };
        let mut outcomes: Vec<(bool, usize, u64)> = Vec::new();
        match target {
            QTarget::Matrix(a) => {
                let r = matrix_invroot(a, &run)?;
                outcomes.push((r.converged(), r.iterations, r.mults));
            }
            QTarget::Ensemble(members) => {
                for a in members {
                    let r = matrix_invroot(a, &run)?;
                    outcomes.push((r.converged(), r.iterations, r.mults));
                }
            }
            QTarget::Scalar { lambda, b0 } => {
                let r = scalar_invroot(lambda, &run, b0)?;
                outcomes.push((r.converged(), r.iterations, r.mults));
            }
        }
        let ok: Vec<_> = outcomes.iter().filter(|o| o.0).collect();
        let (mean_iterations, mean_mults) = if ok.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            let m = ok.len() as f64;
            (
                ok.iter().map(|o| o.1 as f64).sum::<f64>() / m,
                ok.iter().map(|o| o.2 as f64).sum::<f64>() / m,
            )
        };
        rows.push(QSearchRow { q, mean_iterations, mean_mults, converged: ok.len(), runs: outcomes.len() });
    }

    let best = rows
        .iter()
        .filter(|r| r.converged > 0)
        .min_by(|a, b| {
            a.mean_mults
                .total_cmp(&b.mean_mults)
                .then(a.mean_iterations.total_cmp(&b.mean_iterations))
                .then(a.q.cmp(&b.q))
        })
        .ok_or(Error::AllDiverged)?;
    Ok(QSearch { q_best: best.q, rows })
}

//! Ensemble experiments: generate seeded matrices per cell, run every
//! `(p, q)`, and average.

use std::path::PathBuf;

use super::records::{AggregateRow, BenchRow};
use crate::error::{invalid, Result};
use crate::iteration::{matrix_invroot, InitPolicy, IterationParams, Outcome, StopCriterion};
use crate::matgen::{generate_spd, MatrixSpec};

/// Iteration cap for precision runs.
pub const PRECISION_MAX_ITER: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Cell templates; member `k` of a cell uses seed `spec.seed + k`.
    pub specs: Vec<MatrixSpec>,
    pub ps: Vec<u32>,
    pub qs: Vec<u32>,
    pub epsilon: f64,
    pub stop_criterion: StopCriterion,
    pub init_policy: InitPolicy<f64>,
    pub seeds_per_cell: usize,
    pub max_iter: usize,
    /// Run to attainable precision: no threshold, halt when the residual
    /// stops decreasing, track errors, cap at [`PRECISION_MAX_ITER`].
    pub precision: bool,
    pub track_error: bool,
    pub jobs: usize,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            specs: Vec::new(),
            ps: Vec::new(),
            qs: Vec::new(),
            epsilon: 1e-4,
            stop_criterion: StopCriterion::ResidualNorm,
            init_policy: InitPolicy::Identity,
            seeds_per_cell: 10,
            max_iter: 100,
            precision: false,
            track_error: false,
            jobs: 1,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.specs.is_empty() || self.ps.is_empty() || self.qs.is_empty() {
            return Err(invalid("spec, p and q grids must be non-empty"));
        }
        if self.seeds_per_cell == 0 {
            return Err(invalid("seeds per cell must be at least 1"));
        }
        for s in &self.specs {
            s.validate()?;
        }
        for &p in &self.ps {
            for &q in &self.qs {
                self.params(p, q).validate()?;
            }
        }
        Ok(())
    }

    pub fn params(&self, p: u32, q: u32) -> IterationParams<f64> {
        let base = IterationParams::matrix(p, q)
            .with_criterion(self.stop_criterion)
            .with_init(self.init_policy)
            .with_error_tracking(self.track_error);
        if self.precision {
            base.with_epsilon(f64::MIN_POSITIVE)
                .with_criterion(StopCriterion::ResidualNorm)
                .with_max_iter(PRECISION_MAX_ITER)
                .with_stagnation_halt(true)
                .with_error_tracking(true)
        } else {
            base.with_epsilon(self.epsilon).with_max_iter(self.max_iter)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<AggregateRow>,
}

fn run_member(cfg: &ExperimentConfig, spec: &MatrixSpec) -> Result<Vec<BenchRow>> {
    let a = generate_spd(spec)?;
    let mut rows = Vec::with_capacity(cfg.ps.len() * cfg.qs.len());
    for &p in &cfg.ps {
        for &q in &cfg.qs {
            let params = cfg.params(p, q);
            let rep = matrix_invroot(&a, &params)?;
            let normal = matches!(rep.outcome, Outcome::Converged | Outcome::Stagnated);
            rows.push(BenchRow {
                seed: spec.seed,
                n: spec.n,
                density: spec.density,
                cond: spec.cond,
                rho: spec.spectral_radius,
                p,
                q,
                iterations: if normal { rep.iterations } else { params.max_iter },
                mults: rep.mults,
                final_residual: rep.final_residual(),
                final_error: rep.final_error(),
                converged: rep.converged(),
                outcome: rep.outcome,
            });
        }
    }
    Ok(rows)
}

/// One row per `(cell, seed, p, q)` in that order, plus one aggregate per
/// `(cell, p, q)`. Diverged and capped runs are kept as rows but excluded
/// from the means. Members run on `cfg.jobs` threads; output order does not
/// depend on it.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let members: Vec<MatrixSpec> = cfg
        .specs
        .iter()
        .flat_map(|s| (0..cfg.seeds_per_cell as u64).map(move |k| s.with_seed(s.seed.wrapping_add(k))))
        .collect();

    let jobs = cfg.jobs.max(1).min(members.len());
    let mut results: Vec<Option<Result<Vec<BenchRow>>>> = (0..members.len()).map(|_| None).collect();
    if jobs == 1 {
        for (slot, spec) in results.iter_mut().zip(&members) {
            *slot = Some(run_member(cfg, spec));
        }
    } else {
        let chunks: Vec<Vec<(usize, Result<Vec<BenchRow>>)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|t| {
                    let members = &members;
                    scope.spawn(move || {
                        (t..members.len())
                            .step_by(jobs)
                            .map(|i| (i, run_member(cfg, &members[i])))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for (i, r) in chunks.into_iter().flatten() {
            results[i] = Some(r);
        }
    }
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r.expect("every member ran")?);
    }

    let mut aggregates = Vec::new();
    for (c, spec) in cfg.specs.iter().enumerate() {
        let cell = &rows[c * cfg.seeds_per_cell * cfg.ps.len() * cfg.qs.len()..][..cfg.seeds_per_cell * cfg.ps.len() * cfg.qs.len()];
        for &p in &cfg.ps {
            for &q in &cfg.qs {
                let runs: Vec<&BenchRow> = cell.iter().filter(|r| r.p == p && r.q == q).collect();
                let ok: Vec<&&BenchRow> =
                    runs.iter().filter(|r| matches!(r.outcome, Outcome::Converged | Outcome::Stagnated)).collect();
                let m = ok.len() as f64;
                let (mi, mm) = if ok.is_empty() {
                    (f64::NAN, f64::NAN)
                } else {
                    (
                        ok.iter().map(|r| r.iterations as f64).sum::<f64>() / m,
                        ok.iter().map(|r| r.mults as f64).sum::<f64>() / m,
                    )
                };
                aggregates.push(AggregateRow {
                    n: spec.n,
                    density: spec.density,
                    cond: spec.cond,
                    rho: spec.spectral_radius,
                    p,
                    q,
                    runs: runs.len(),
                    converged: runs.iter().filter(|r| r.converged).count(),
                    mean_iterations: mi,
                    mean_mults: mm,
                });
            }
        }
    }
    Ok(ExperimentResult { rows, aggregates })
}

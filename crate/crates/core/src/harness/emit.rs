//! CSV data behind the residual-map and error-history plots.

use std::io::Write;

use super::records::fmt_float;
use crate::convergence::residual_map;
use crate::error::{invalid, Error, Result};
use crate::iteration::{IterationReport, ScalarReport};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualMapSample {
    pub p: u32,
    pub q: u32,
    pub r0: f64,
    pub r1: f64,
}

/// `r0 = 0, step, 2 step, ...` below 1, for every `(p, q)`.
pub fn residual_map_grid(ps: &[u32], qs: &[u32], step: f64) -> Result<Vec<ResidualMapSample>> {
    if !(step > 0.0 && step < 1.0) {
        return Err(invalid(format!("grid step must lie in (0, 1), got {step}")));
    }
    let mut out = Vec::new();
    for &p in ps {
        for &q in qs {
            let mut i = 0u64;
            loop {
                let r0 = i as f64 * step;
                if r0 >= 1.0 {
                    break;
                }
                out.push(ResidualMapSample { p, q, r0, r1: residual_map(p, q, r0)? });
                i += 1;
            }
        }
    }
    Ok(out)
}

/// Columns `p,q,r0,abs_r1`.
pub fn emit_residual_map_grid(w: impl Write, samples: &[ResidualMapSample]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(["p", "q", "r0", "abs_r1"])?;
    for s in samples {
        wtr.write_record([s.p.to_string(), s.q.to_string(), fmt_float(s.r0), fmt_float(s.r1.abs())])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Runs that carry per-step error and residual norms.
pub trait ErrorHistory {
    /// `(error_norms, residual_norms)`, one entry per iterate.
    fn histories(&self) -> Result<(Vec<f64>, Vec<f64>)>;
}

impl<T: Real> ErrorHistory for IterationReport<T> {
    fn histories(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let errors = self.error_norms.as_ref().ok_or(Error::GroundTruthUnavailable)?;
        Ok((
            errors.iter().map(|e| e.as_f64()).collect(),
            self.residual_norms.iter().map(|r| r.as_f64()).collect(),
        ))
    }
}

impl<T: Real> ErrorHistory for ScalarReport<T> {
    fn histories(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((
            self.error_history.iter().map(|e| e.abs().as_f64()).collect(),
            self.residual_history.iter().map(|r| r.abs().as_f64()).collect(),
        ))
    }
}

/// Columns `k,error_norm,residual_norm`.
pub fn emit_error_history(w: impl Write, run: &impl ErrorHistory) -> Result<()> {
    let (errors, residuals) = run.histories()?;
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(["k", "error_norm", "residual_norm"])?;
    for (k, (e, r)) in errors.iter().zip(&residuals).enumerate() {
        wtr.write_record([k.to_string(), fmt_float(*e), fmt_float(*r)])?;
    }
    wtr.flush()?;
    Ok(())
}

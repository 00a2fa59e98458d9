//! CSV schemas for benchmark rows and per-cell aggregates.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::iteration::Outcome;

pub const BENCH_HEADER: [&str; 13] = [
    "seed",
    "n",
    "density",
    "cond",
    "rho",
    "p",
    "q",
    "iterations",
    "mults",
    "final_residual",
    "final_error",
    "converged",
    "outcome",
];

pub const AGGREGATE_HEADER: [&str; 12] = [
    "n",
    "density",
    "cond",
    "rho",
    "p",
    "q",
    "runs",
    "converged",
    "mean_iterations",
    "mean_mults",
    "iterations",
    "mults",
];

/// Floats use 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One run. `density`, `cond` and `rho` are the generator targets, so a row
/// together with its seed identifies the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub density: f64,
    pub cond: f64,
    pub rho: f64,
    pub p: u32,
    pub q: u32,
    pub iterations: usize,
    pub mults: u64,
    pub final_residual: f64,
    pub final_error: Option<f64>,
    pub converged: bool,
    pub outcome: Outcome,
}

/// Means over the rows of one `(cell, p, q)` that ended normally.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub n: usize,
    pub density: f64,
    pub cond: f64,
    pub rho: f64,
    pub p: u32,
    pub q: u32,
    pub runs: usize,
    pub converged: usize,
    pub mean_iterations: f64,
    pub mean_mults: f64,
}

impl AggregateRow {
    /// Mean iterations rounded to the nearest integer.
    pub fn iterations(&self) -> Option<u64> {
        self.mean_iterations.is_finite().then(|| self.mean_iterations.round() as u64)
    }

    pub fn mults(&self) -> Option<u64> {
        self.mean_mults.is_finite().then(|| self.mean_mults.round() as u64)
    }
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: u64) -> Result<T> {
    let s = rec.get(i).unwrap_or("");
    s.parse().map_err(|_| Error::Csv(format!("line {line}: bad {} value {s:?}", BENCH_HEADER.get(i).unwrap_or(&"?"))))
}

fn check_header(rdr: &mut csv::Reader<impl Read>, want: &[&str]) -> Result<()> {
    let got = rdr.headers()?;
    if got.iter().ne(want.iter().copied()) {
        return Err(Error::Csv(format!("unexpected header {:?}", got.iter().collect::<Vec<_>>())));
    }
    Ok(())
}

pub fn write_bench_rows(w: impl Write, rows: &[BenchRow]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(BENCH_HEADER)?;
    for r in rows {
        wtr.write_record([
            r.seed.to_string(),
            r.n.to_string(),
            fmt_float(r.density),
            fmt_float(r.cond),
            fmt_float(r.rho),
            r.p.to_string(),
            r.q.to_string(),
            r.iterations.to_string(),
            r.mults.to_string(),
            fmt_float(r.final_residual),
            r.final_error.map(fmt_float).unwrap_or_default(),
            r.converged.to_string(),
            r.outcome.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_bench_rows(r: impl Read) -> Result<Vec<BenchRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(&mut rdr, &BENCH_HEADER)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let final_error = match rec.get(10) {
            Some("") | None => None,
            Some(_) => Some(field(&rec, 10, line)?),
        };
        let outcome = rec.get(12).unwrap_or("").parse::<Outcome>().map_err(|e| Error::Csv(format!("line {line}: {e}")))?;
        rows.push(BenchRow {
            seed: field(&rec, 0, line)?,
            n: field(&rec, 1, line)?,
            density: field(&rec, 2, line)?,
            cond: field(&rec, 3, line)?,
            rho: field(&rec, 4, line)?,
            p: field(&rec, 5, line)?,
            q: field(&rec, 6, line)?,
            iterations: field(&rec, 7, line)?,
            mults: field(&rec, 8, line)?,
            final_residual: field(&rec, 9, line)?,
            final_error,
            converged: field(&rec, 11, line)?,
            outcome,
        });
    }
    Ok(rows)
}

pub fn write_aggregate_rows(w: impl Write, rows: &[AggregateRow]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(AGGREGATE_HEADER)?;
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        wtr.write_record([
            r.n.to_string(),
            fmt_float(r.density),
            fmt_float(r.cond),
            fmt_float(r.rho),
            r.p.to_string(),
            r.q.to_string(),
            r.runs.to_string(),
            r.converged.to_string(),
            fmt_float(r.mean_iterations),
            fmt_float(r.mean_mults),
            opt(r.iterations()),
            opt(r.mults()),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_aggregate_rows(r: impl Read) -> Result<Vec<AggregateRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(&mut rdr, &AGGREGATE_HEADER)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        rows.push(AggregateRow {
            n: field(&rec, 0, line)?,
            density: field(&rec, 1, line)?,
            cond: field(&rec, 2, line)?,
            rho: field(&rec, 3, line)?,
            p: field(&rec, 4, line)?,
            q: field(&rec, 5, line)?,
            runs: field(&rec, 6, line)?,
            converged: field(&rec, 7, line)?,
            mean_iterations: field(&rec, 8, line)?,
            mean_mults: field(&rec, 9, line)?,
        });
    }
    Ok(rows)
}

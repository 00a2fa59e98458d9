//! Stability scans of the one-step residual map over `r0` in `(0, 1)`.

use std::fmt;

use super::residual::residual_map;

pub const DEFAULT_GRID_STEP: f64 = 1e-4;
pub const DEFAULT_Q_CAP: u32 = 40;
pub const DEFAULT_P_CAP: u32 = 20;

/// Scan endpoints are `DELTA` and `1 - DELTA`.
const DELTA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanBound {
    Max(u32),
    /// Every value up to the cap passed.
    AtCap(u32),
}

impl ScanBound {
    pub fn value(self) -> u32 {
        match self {
            ScanBound::Max(v) | ScanBound::AtCap(v) => v,
        }
    }
}

impl fmt::Display for ScanBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanBound::Max(v) => write!(f, "{v}"),
            ScanBound::AtCap(v) => write!(f, ">{v}"),
        }
    }
}

/// True when `|r1| < 1` on every grid point.
pub fn is_stable(p: u32, q: u32, step: f64) -> bool {
    let mut i = 0u64;
    loop {
        let r0 = DELTA + i as f64 * step;
        if r0 > 1.0 - DELTA {
            return true;
        }
        match residual_map(p, q, r0) {
            Ok(r1) if r1.abs() < 1.0 => {}
            _ => return false,
        }
        i += 1;
    }
}

fn largest(range: impl DoubleEndedIterator<Item = u32>, cap: u32, stable: impl Fn(u32) -> bool) -> ScanBound {
    for v in range.rev() {
        if stable(v) {
            return if v == cap { ScanBound::AtCap(cap) } else { ScanBound::Max(v) };
        }
    }
    ScanBound::Max(0)
}

/// Largest `q <= q_cap` whose one-step map keeps `|r1| < 1` on the grid.
pub fn stability_scan_max_q(p: u32, step: f64, q_cap: u32) -> ScanBound {
    largest(2..=q_cap, q_cap, |q| is_stable(p, q, step))
}

/// Largest `p <= p_cap` whose one-step map keeps `|r1| < 1` on the grid.
pub fn stability_scan_max_p(q: u32, step: f64, p_cap: u32) -> ScanBound {
    largest(1..=p_cap, p_cap, |p| is_stable(p, q, step))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityTable {
    /// `(p, max q)`.
    pub rows: Vec<(u32, ScanBound)>,
    /// `(q, max p)`.
    pub cols: Vec<(u32, ScanBound)>,
    pub grid_step: f64,
    pub q_cap: u32,
    pub p_cap: u32,
}

impl StabilityTable {
    pub fn compute(
        ps: impl IntoIterator<Item = u32>,
        qs: impl IntoIterator<Item = u32>,
        grid_step: f64,
        q_cap: u32,
        p_cap: u32,
    ) -> Self {
        let rows = ps.into_iter().map(|p| (p, stability_scan_max_q(p, grid_step, q_cap))).collect();
        let cols = qs.into_iter().map(|q| (q, stability_scan_max_p(q, grid_step, p_cap))).collect();
        Self { rows, cols, grid_step, q_cap, p_cap }
    }

    pub fn max_q(&self, p: u32) -> Option<ScanBound> {
        self.rows.iter().find(|(k, _)| *k == p).map(|(_, b)| *b)
    }

    pub fn max_p(&self, q: u32) -> Option<ScanBound> {
        self.cols.iter().find(|(k, _)| *k == q).map(|(_, b)| *b)
    }
}

impl fmt::Display for StabilityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[(u32, ScanBound)], key: bool| {
            v.iter()
                .map(|(k, b)| if key { k.to_string() } else { b.to_string() })
                .collect::<Vec<_>>()
                .join(" ")
        };
        if !self.rows.is_empty() {
            writeln!(f, "p:     {}", join(&self.rows, true))?;
            writeln!(f, "q_max: {}", join(&self.rows, false))?;
        }
        if !self.cols.is_empty() {
            writeln!(f, "q:     {}", join(&self.cols, true))?;
            writeln!(f, "p_max: {}", join(&self.cols, false))?;
        }
        Ok(())
    }
}

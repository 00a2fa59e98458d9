//! Reporting helpers for the acceptance suite.
//!
//! Each criterion yields a [`Verdict`]; [`run_all`] prints one line per
//! criterion and reports whether all passed. Panics count as failures.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub run: fn() -> Verdict,
}

/// `|got - want| <= tol` entrywise, with equal lengths.
pub fn within(got: &[f64], want: &[f64], tol: f64) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol)
}

pub fn fmt_list<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Runs every criterion in order, printing `criterion N: PASS|FAIL ...`.
pub fn run_all(criteria: &[Criterion]) -> bool {
    let mut all = true;
    for c in criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Verdict::new(false, format!("panicked: {msg}"))
        });
        all &= verdict.pass;
        println!(
            "criterion {:>2}: {} {} [{:.1}s] {}",
            c.id,
            if verdict.pass { "PASS" } else { "FAIL" },
            c.title,
            start.elapsed().as_secs_f64(),
            verdict.detail
        );
    }
    all
}

use super::params::{IterationParams, StopCriterion};
use crate::error::{invalid, Result};
use crate::real::Real;

/// Scalar runs are flagged divergent once `|r_k|` exceeds this.
pub const SCALAR_DIVERGENCE_BOUND: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    MaxIterations,
    Diverged,
    /// Residual stopped decreasing; the reported iterate is the last one
    /// before the increase.
    Stagnated,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Converged => "converged",
            Outcome::MaxIterations => "max_iterations",
            Outcome::Diverged => "diverged",
            Outcome::Stagnated => "stagnated",
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Outcome {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "converged" => Ok(Outcome::Converged),
            "max_iterations" => Ok(Outcome::MaxIterations),
            "diverged" => Ok(Outcome::Diverged),
            "stagnated" => Ok(Outcome::Stagnated),
            other => Err(format!("unknown outcome {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScalarReport<T> {
    pub outcome: Outcome,
    pub iterations: usize,
    /// Charged as if the scalar were a 1×1 matrix: `p + (p + q - 1) j`.
    pub mults: u64,
    pub value_history: Vec<T>,
    /// `r_k = 1 - b_k^p lambda`.
    pub residual_history: Vec<T>,
    /// `b_k - lambda^(-1/p)`.
    pub error_history: Vec<T>,
}

impl<T: Real> ScalarReport<T> {
    pub fn converged(&self) -> bool {
        self.outcome == Outcome::Converged
    }

    pub fn value(&self) -> T {
        *self.value_history.last().expect("non-empty history")
    }
}

/// `1 - lambda b^p`, with `b^p` formed by repeated multiplication.
#[inline]
pub fn scalar_residual<T: Real>(b: T, lambda: T, p: u32) -> T {
    let mut pw = b;
    for _ in 1..p {
        pw *= b;
    }
    T::one() - lambda * pw
}

/// `(1/p) b (p + r + r^2 + ... + r^(q-1))`, evaluated in the same order as
/// the matrix step so a 1×1 matrix run reproduces it exactly.
#[inline]
pub fn scalar_step<T: Real>(b: T, r: T, p: u32, q: u32) -> T {
    let inv_p = T::recip_count(p);
    let mut t = r + T::from_count(p);
    let mut pw = r;
    for _ in 2..q {
        pw *= r;
        t += pw;
    }
    (b * t) * inv_p
}

pub fn scalar_invroot<T: Real>(lambda: T, params: &IterationParams<T>, b0: T) -> Result<ScalarReport<T>> {
    params.validate()?;
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(invalid(format!("lambda must be positive, got {lambda}")));
    }
    if !(b0 > T::zero()) || !b0.is_finite() {
        return Err(invalid(format!("b0 must be positive, got {b0}")));
    }
    let (p, q) = (params.p, params.q);
    let target = lambda.inv_root(p);
    let bound = T::lit(SCALAR_DIVERGENCE_BOUND);

    let mut report = ScalarReport {
        outcome: Outcome::MaxIterations,
        iterations: 0,
        mults: 0,
        value_history: Vec::new(),
        residual_history: Vec::new(),
        error_history: Vec::new(),
    };
    let mut b = b0;
    let mut k = 0;
    loop {
        let r = scalar_residual(b, lambda, p);
        let err = b - target;
        report.value_history.push(b);
        report.residual_history.push(r);
        report.error_history.push(err);
        let stop = match params.stop_criterion {
            StopCriterion::ResidualNorm => r.abs(),
            StopCriterion::ErrorNorm => err.abs(),
        };
        if stop < params.epsilon {
            report.outcome = Outcome::Converged;
            break;
        }
        if !r.is_finite() || r.abs() > bound {
            report.outcome = Outcome::Diverged;
            break;
        }
        if k == params.max_iter {
            report.outcome = Outcome::MaxIterations;
            break;
        }
        b = scalar_step(b, r, p, q);
        k += 1;
    }
    report.iterations = k;
    report.mults = params.mults_for(k);
    Ok(report)
}

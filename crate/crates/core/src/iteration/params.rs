use crate::error::{invalid, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopCriterion {
    /// `|R_k|_2 < eps` (scalar: `|r_k| < eps`).
    ResidualNorm,
    /// `|B_k - A^(-1/p)|_2 < eps` (scalar: `|b_k - lambda^(-1/p)| < eps`).
    ErrorNorm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitPolicy<T> {
    Identity,
    ScaledIdentity(T),
    ScaledA(T),
    /// `B_0 = A / (|A|_1 |A|_inf)`.
    PanReif,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationParams<T> {
    pub p: u32,
    pub q: u32,
    pub epsilon: T,
    pub max_iter: usize,
    pub stop_criterion: StopCriterion,
    pub init_policy: InitPolicy<T>,
    /// Record `|B_k - A^(-1/p)|_2` every step (needs an eigendecomposition).
    pub track_error: bool,
    /// Stop at the first step whose residual norm does not decrease and
    /// report the iterate before it.
    pub halt_on_stagnation: bool,
}

impl<T: Real> IterationParams<T> {
    /// Matrix defaults: `eps = 1e-4`, residual criterion, `B_0 = I`.
    pub fn matrix(p: u32, q: u32) -> Self {
        Self {
            p,
            q,
            epsilon: T::lit(1e-4),
            max_iter: 100,
            stop_criterion: StopCriterion::ResidualNorm,
            init_policy: InitPolicy::Identity,
            track_error: false,
            halt_on_stagnation: false,
        }
    }

    /// Scalar defaults: `eps = 1e-8`, error criterion.
    pub fn scalar(p: u32, q: u32) -> Self {
        Self {
            epsilon: T::lit(1e-8),
            max_iter: 1000,
            stop_criterion: StopCriterion::ErrorNorm,
            ..Self::matrix(p, q)
        }
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_criterion(mut self, criterion: StopCriterion) -> Self {
        self.stop_criterion = criterion;
        self
    }

    pub fn with_init(mut self, init: InitPolicy<T>) -> Self {
        self.init_policy = init;
        self
    }

    pub fn with_error_tracking(mut self, on: bool) -> Self {
        self.track_error = on;
        self
    }

    pub fn with_stagnation_halt(mut self, on: bool) -> Self {
        self.halt_on_stagnation = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 1 {
            return Err(invalid(format!("p must be >= 1, got {}", self.p)));
        }
        if self.q < 2 {
            return Err(invalid(format!("q must be >= 2, got {}", self.q)));
        }
        if !(self.epsilon > T::zero()) || !self.epsilon.is_finite() {
            return Err(invalid(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be positive"));
        }
        match self.init_policy {
            InitPolicy::ScaledIdentity(a) | InitPolicy::ScaledA(a) if !(a > T::zero()) || !a.is_finite() => {
                Err(invalid(format!("init scale must be positive, got {a}")))
            }
            _ => Ok(()),
        }
    }

    /// `p + (p + q - 1) j`.
    pub fn mults_for(&self, iterations: usize) -> u64 {
        mult_count(self.p, self.q, iterations)
    }
}

/// Products needed for `j` iterations: `p + (p + q - 1) j`.
pub fn mult_count(p: u32, q: u32, j: usize) -> u64 {
    p as u64 + (p as u64 + q as u64 - 1) * j as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mult_count_spot_values() {
        assert_eq!(mult_count(1, 2, 13), 27);
        assert_eq!(mult_count(4, 4, 5), 39);
        assert_eq!(mult_count(3, 5, 15), 108);
    }

    #[test]
    fn validation() {
        assert!(IterationParams::<f64>::matrix(1, 2).validate().is_ok());
        assert!(IterationParams::<f64>::matrix(0, 2).validate().is_err());
        assert!(IterationParams::<f64>::matrix(1, 1).validate().is_err());
        assert!(IterationParams::<f64>::matrix(1, 2).with_epsilon(0.0).validate().is_err());
        assert!(IterationParams::<f64>::matrix(1, 2).with_epsilon(f64::NAN).validate().is_err());
        assert!(IterationParams::<f64>::matrix(1, 2).with_max_iter(0).validate().is_err());
        let bad = IterationParams::<f64>::matrix(1, 2).with_init(InitPolicy::ScaledA(-1.0));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn defaults() {
        let m = IterationParams::<f64>::matrix(2, 3);
        assert_eq!(m.epsilon, 1e-4);
        assert_eq!(m.stop_criterion, StopCriterion::ResidualNorm);
        let s = IterationParams::<f64>::scalar(2, 3);
        assert_eq!(s.epsilon, 1e-8);
        assert_eq!(s.stop_criterion, StopCriterion::ErrorNorm);
    }
}

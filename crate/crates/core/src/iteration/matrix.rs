use super::params::{InitPolicy, IterationParams, StopCriterion};
use super::scalar::Outcome;
use crate::error::{invalid, Error, Result};
use crate::linalg::{
    inverse_pth_root, mat_mul, multiply, symmetric_eigenvalues, Matrix, MultLedger, SymMatrix,
};
use crate::real::Real;

/// Matrix runs are flagged divergent once `|R_k|_2` exceeds this.
pub const MATRIX_DIVERGENCE_BOUND: f64 = 1e2;

/// Relative bound on `|BA - AB|_F` against `|A|_2 |B|_2`.
pub const COMMUTATION_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct IterationReport<T> {
    pub outcome: Outcome,
    pub iterations: usize,
    /// Products actually performed.
    pub mults: u64,
    /// `|R_k|_2` for `k = 0..=iterations`.
    pub residual_norms: Vec<T>,
    /// `|B_k - A^(-1/p)|_2`, present when errors were tracked.
    pub error_norms: Option<Vec<T>>,
    pub final_iterate: Matrix<T>,
}

impl<T: Real> IterationReport<T> {
    pub fn converged(&self) -> bool {
        self.outcome == Outcome::Converged
    }

    pub fn final_residual(&self) -> T {
        *self.residual_norms.last().expect("non-empty history")
    }

    pub fn final_error(&self) -> Option<T> {
        self.error_norms.as_ref().and_then(|e| e.last().copied())
    }

    /// Final iterate as a symmetric matrix (symmetric part).
    pub fn final_symmetric(&self) -> SymMatrix<T> {
        SymMatrix::from_symmetrized(&self.final_iterate)
    }
}

/// `R = I - A B^p`, charging `p` products.
pub fn residual<T: Real>(a: &Matrix<T>, b: &Matrix<T>, p: u32, ledger: &mut MultLedger) -> Result<Matrix<T>> {
    let mut pw = b.clone();
    for _ in 1..p {
        pw = mat_mul(&pw, b, ledger)?;
    }
    Ok(mat_mul(a, &pw, ledger)?.shifted_neg(T::one()))
}

/// `(1/p) B (p I + R + ... + R^(q-1))`, charging `q - 1` products.
pub fn advance<T: Real>(b: &Matrix<T>, r: &Matrix<T>, p: u32, q: u32, ledger: &mut MultLedger) -> Result<Matrix<T>> {
    let inv_p = T::recip_count(p);
    let mut t = r.clone();
    t.add_diagonal(T::from_count(p));
    let mut pw = r.clone();
    for _ in 2..q {
        pw = mat_mul(&pw, r, ledger)?;
        t = t.add(&pw);
    }
    Ok(mat_mul(b, &t, ledger)?.scale(inv_p))
}

/// Fails unless `|BA - AB|_F <= 1e-8 |A|_2 |B|_2`. Not charged to any ledger.
pub fn check_commutation<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: b.n() });
    }
    let gap = multiply(b, a).sub(&multiply(a, b)).frobenius();
    if gap == T::zero() {
        return Ok(());
    }
    let bound = T::lit(COMMUTATION_TOLERANCE) * a.norm_two()? * b.norm_two()?;
    if gap > bound {
        return Err(Error::CommutationViolated { gap: gap.as_f64(), bound: bound.as_f64() });
    }
    Ok(())
}

/// One step of the (p,q) iteration. Returns `(B_next, R)` where `R` is the
/// residual of the input `B`; charges exactly `p + q - 1` products.
pub fn matrix_step<T: Real>(
    b: &Matrix<T>,
    a: &SymMatrix<T>,
    p: u32,
    q: u32,
    ledger: &mut MultLedger,
) -> Result<(Matrix<T>, Matrix<T>)> {
    if p < 1 || q < 2 {
        return Err(invalid(format!("need p >= 1 and q >= 2, got p={p}, q={q}")));
    }
    check_commutation(a, b)?;
    let r = residual(a, b, p, ledger)?;
    let next = advance(b, &r, p, q, ledger)?;
    Ok((next, r))
}

pub fn pan_reif_init<T: Real>(a: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    let denom = a.norm_one() * a.norm_inf();
    if denom == T::zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(a.scale(T::one().quot(denom)))
}

pub fn initial_iterate<T: Real>(a: &SymMatrix<T>, policy: InitPolicy<T>) -> Result<Matrix<T>> {
    let n = a.n();
    Ok(match policy {
        InitPolicy::Identity => Matrix::identity(n),
        InitPolicy::ScaledIdentity(alpha) => Matrix::scaled_identity(n, alpha),
        InitPolicy::ScaledA(alpha) => a.scale(alpha).into_matrix(),
        InitPolicy::PanReif => pan_reif_init(a)?.into_matrix(),
    })
}

/// Runs the (p,q) iteration on an SPD matrix.
///
/// The initial residual is charged `p` products and every step `p + q - 1`,
/// so a run of `j` steps costs `p + (p + q - 1) j`. Non-convergence is an
/// outcome in the report, not an error.
pub fn matrix_invroot<T: Real>(a: &SymMatrix<T>, params: &IterationParams<T>) -> Result<IterationReport<T>> {
    params.validate()?;
    let n = a.n();
    if n == 0 {
        return Err(invalid("matrix is empty"));
    }
    let (p, q) = (params.p, params.q);
    let need_truth = params.track_error || params.stop_criterion == StopCriterion::ErrorNorm;
    let truth = if need_truth {
        Some(inverse_pth_root(a, p)?)
    } else {
        let lo = symmetric_eigenvalues(a)?[0];
        if lo <= T::zero() {
            return Err(Error::NotPositiveDefinite(lo.as_f64()));
        }
        None
    };

    let mut b = initial_iterate(a, params.init_policy)?;
    check_commutation(a, &b)?;

    let mut ledger = MultLedger::new();
    let mut r = residual(a, &b, p, &mut ledger)?;
    let mut residual_norms = Vec::new();
    let mut error_norms = truth.as_ref().map(|_| Vec::new());
    let bound = T::lit(MATRIX_DIVERGENCE_BOUND);
    let mut previous: Option<Matrix<T>> = None;
    let mut k = 0;

    let outcome = loop {
        let rn = r.norm_two()?;
        let en = match &truth {
            Some(z) => Some(b.sub(z).norm_two()?),
            None => None,
        };

        if params.halt_on_stagnation {
            if let (Some(prev), Some(&last)) = (previous.take(), residual_norms.last()) {
                if !(rn < last) {
                    b = prev;
                    k -= 1;
                    break Outcome::Stagnated;
                }
            }
        }

        residual_norms.push(rn);
        if let (Some(hist), Some(e)) = (error_norms.as_mut(), en) {
            hist.push(e);
        }

        let stop = match params.stop_criterion {
            StopCriterion::ResidualNorm => rn,
            StopCriterion::ErrorNorm => en.expect("ground truth"),
        };
        if stop < params.epsilon {
            break Outcome::Converged;
        }
        if !rn.is_finite() || rn > bound {
            break Outcome::Diverged;
        }
        if k == params.max_iter {
            break Outcome::MaxIterations;
        }

        let next = advance(&b, &r, p, q, &mut ledger)?;
        r = residual(a, &next, p, &mut ledger)?;
        if params.halt_on_stagnation {
            previous = Some(std::mem::replace(&mut b, next));
        } else {
            b = next;
        }
        k += 1;
    };

    Ok(IterationReport {
        outcome,
        iterations: k,
        mults: ledger.count,
        residual_norms,
        error_norms,
        final_iterate: b,
    })
}

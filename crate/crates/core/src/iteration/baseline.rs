//! Reference formulas for the special cases and for the literal defining
//! forms of the iteration. Used to cross-check [`super::matrix_step`].

use crate::error::{invalid, Error, Result};
use crate::linalg::{mat_mul, multiply, spectral_function, Matrix, MultLedger, SymMatrix};
use crate::real::Real;

fn check_dims<T: Real>(b: &Matrix<T>, a: &Matrix<T>) -> Result<()> {
    if b.n() != a.n() {
        return Err(Error::DimensionMismatch { left: b.n(), right: a.n() });
    }
    Ok(())
}

fn power<T: Real>(m: &Matrix<T>, k: u32, ledger: &mut MultLedger) -> Result<Matrix<T>> {
    let mut out = Matrix::identity(m.n());
    if k == 0 {
        return Ok(out);
    }
    out = m.clone();
    for _ in 1..k {
        out = mat_mul(&out, m, ledger)?;
    }
    Ok(out)
}

/// Bini et al.: `(1/p)[(p + 1) B - B^(p+1) A]`.
pub fn bini_step<T: Real>(b: &Matrix<T>, a: &SymMatrix<T>, p: u32, ledger: &mut MultLedger) -> Result<Matrix<T>> {
    check_dims(b, a)?;
    if p < 1 {
        return Err(invalid("p must be >= 1"));
    }
    let bp1 = power(b, p + 1, ledger)?;
    let m = mat_mul(&bp1, a, ledger)?;
    let pf = T::from_count(p);
    Ok(b.scale(pf + T::one()).sub(&m).scale(T::recip_count(p)))
}

/// Altman's hyperpower method: `B (I + R + ... + R^(q-1))`, `R = I - B A`.
pub fn altman_step<T: Real>(b: &Matrix<T>, a: &SymMatrix<T>, q: u32, ledger: &mut MultLedger) -> Result<Matrix<T>> {
    check_dims(b, a)?;
    if q < 2 {
        return Err(invalid("q must be >= 2"));
    }
    let r = mat_mul(b, a, ledger)?.shifted_neg(T::one());
    let mut t = r.clone();
    t.add_diagonal(T::one());
    let mut pw = r.clone();
    for _ in 2..q {
        pw = mat_mul(&pw, &r, ledger)?;
        t = t.add(&pw);
    }
    mat_mul(b, &t, ledger)
}

/// Newton–Schulz: `2B - B^2 A`.
pub fn newton_schulz_step<T: Real>(b: &Matrix<T>, a: &SymMatrix<T>, ledger: &mut MultLedger) -> Result<Matrix<T>> {
    check_dims(b, a)?;
    let b2 = mat_mul(b, b, ledger)?;
    let m = mat_mul(&b2, a, ledger)?;
    Ok(b.scale(T::lit(2.0)).sub(&m))
}

/// `(1/p)[(p-1) B - ((I - B^p A)^q - I) B^(1-p) A^(-1)]`, with `B^(1-p)` and
/// `A^(-1)` from spectral decompositions. `B` must be symmetric positive
/// definite when `p > 1`.
pub fn defining_form_step<T: Real>(b: &SymMatrix<T>, a: &SymMatrix<T>, p: u32, q: u32) -> Result<Matrix<T>> {
    check_dims(b, a)?;
    let n = b.n();
    let pf = T::from_count(p);
    let one_minus_p = T::one() - pf;
    let b_neg = spectral_function(b, |x| if p == 1 { T::one() } else { x.powf(one_minus_p) })?;
    let a_inv = spectral_function(a, |x| T::one().quot(x))?;
    let bp = power(b, p, &mut MultLedger::new())?;
    let r = multiply(&bp, a).shifted_neg(T::one());
    let mut rq = Matrix::identity(n);
    for _ in 0..q {
        rq = multiply(&rq, &r);
    }
    rq.add_diagonal(-T::one());
    let tail = multiply(&multiply(&rq, &b_neg), &a_inv);
    Ok(b.scale(pf - T::one()).sub(&tail).scale(T::recip_count(p)))
}

/// `(1/p)[(p-1) I - sum_{i=1..q} C(q,i) (-1)^i (B^p A)^(i-1)] B`.
pub fn binomial_form_step<T: Real>(b: &Matrix<T>, a: &SymMatrix<T>, p: u32, q: u32) -> Result<Matrix<T>> {
    check_dims(b, a)?;
    let n = b.n();
    let pf = T::from_count(p);
    let m = multiply(&power(b, p, &mut MultLedger::new())?, a);
    let mut s = Matrix::scaled_identity(n, pf - T::one());
    let mut mpow = Matrix::identity(n);
    let mut binom = T::one();
    for i in 1..=q {
        binom = (binom * T::from_count(q - i + 1)).quot(T::from_count(i));
        let coeff = if i % 2 == 1 { binom } else { -binom };
        // subtracting C(q,i)(-1)^i M^(i-1)
        s = s.add(&mpow.scale(coeff));
        mpow = multiply(&mpow, &m);
    }
    Ok(multiply(&s, b).scale(T::recip_count(p)))
}

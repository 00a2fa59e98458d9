//! One-step residual dynamics of the scalar iteration and the contraction
//! functions built from it.

use crate::error::{invalid, Error, Result};
use crate::iteration::{scalar_residual, scalar_step};
use crate::linalg::{multiply, symmetric_eigenvalues, Matrix, SymMatrix};
use crate::real::Real;

/// `r1` after one step from residual `r0`, with `lambda = 1` and
/// `b0 = (1 - r0)^(1/p)`. `r0 = 1` maps to 1.
pub fn residual_map<T: Real>(p: u32, q: u32, r0: T) -> Result<T> {
    check_pq(p, q)?;
    if !(r0 >= T::zero()) || r0 > T::one() {
        return Err(Error::OutOfDomain { value: r0.as_f64(), domain: "[0, 1]" });
    }
    if r0 == T::one() {
        return Ok(T::one());
    }
    let b0 = (T::one() - r0).powf(T::recip_count(p));
    let r = scalar_residual(b0, T::one(), p);
    let b1 = scalar_step(b0, r, p, q);
    Ok(scalar_residual(b1, T::one(), p))
}

fn check_pq(p: u32, q: u32) -> Result<()> {
    if p < 1 || q < 2 {
        return Err(invalid(format!("need p >= 1 and q >= 2, got p={p}, q={q}")));
    }
    Ok(())
}

fn binomial<T: Real>(n: u32, k: u32) -> T {
    let mut c = T::one();
    for i in 1..=k {
        c = (c * T::from_count(n - k + i)).quot(T::from_count(i));
    }
    c
}

/// `1 + r + ... + r^(m-1) = (1 - r^m) / (1 - r)`.
fn geometric<T: Real>(r: T, m: u32) -> T {
    let mut s = T::zero();
    let mut pw = T::one();
    for _ in 0..m {
        s += pw;
        pw *= r;
    }
    s
}

/// `r^m - (1/p^p) sum_{i=2..p} C(p,i) p^(p-i) r^(i-1) (1-r)^(1-i) (1-r^m)^i`.
fn contraction<T: Real>(r: T, p: u32, m: u32) -> T {
    let pf = T::from_count(p);
    let one_minus = T::one() - r;
    let geo = geometric(r, m);
    let mut sum = T::zero();
    for i in 2..=p {
        // (1-r)^(1-i) (1-r^m)^i = (1-r) geo^i
        let term = binomial::<T>(p, i) * pf.powi((p - i) as i32) * r.powi(i as i32 - 1) * one_minus * geo.powi(i as i32);
        sum += term;
    }
    r.powi(m as i32) - sum.quot(pf.powi(p as i32))
}

/// The contraction function exactly as printed in the convergence
/// condition: leading term `r^q` and `(1 - r^q)` inside the sum.
///
/// For `p >= 2` this does not describe the one-step dynamics; see
/// [`corrected_h`]. Example: `p = q = 2`, `r = 0.5` gives 0.109375, so the
/// implied residual `r g(r)` is 0.0546875 while the true step gives 0.21875.
pub fn paper_g<T: Real>(r: T, p: u32, q: u32) -> T {
    contraction(r, p, q)
}

/// The contraction function consistent with the step:
/// `residual_map(p, q, r) = r h(r)`.
pub fn corrected_h<T: Real>(r: T, p: u32, q: u32) -> T {
    contraction(r, p, q - 1)
}

fn max_over<T: Real>(spectrum: &[T], p: u32, q: u32, f: fn(T, u32, u32) -> T) -> Result<T> {
    check_pq(p, q)?;
    let mut c = T::zero();
    for &mu in spectrum {
        if !(mu > -T::one() && mu < T::one()) {
            return Err(Error::OutOfDomain { value: mu.as_f64(), domain: "(-1, 1)" });
        }
        c = c.max(f(mu, p, q).abs());
    }
    Ok(c)
}

/// `max |paper_g(mu)|` over the eigenvalues of `R_0`.
pub fn paper_condition_c<T: Real>(spectrum_r0: &[T], p: u32, q: u32) -> Result<T> {
    max_over(spectrum_r0, p, q, paper_g)
}

/// `max |corrected_h(mu)|` over the eigenvalues of `R_0`.
pub fn corrected_condition_c<T: Real>(spectrum_r0: &[T], p: u32, q: u32) -> Result<T> {
    max_over(spectrum_r0, p, q, corrected_h)
}

/// Eigenvalues of `R_0 = I - A B_0^p` for a start `B_0` commuting with `A`.
pub fn initial_residual_spectrum<T: Real>(a: &SymMatrix<T>, b0: &Matrix<T>, p: u32) -> Result<Vec<T>> {
    if a.n() != b0.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: b0.n() });
    }
    let mut pw = b0.clone();
    for _ in 1..p {
        pw = multiply(&pw, b0);
    }
    let r0 = multiply(a, &pw).shifted_neg(T::one()).symmetrize();
    symmetric_eigenvalues(&r0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_and_endpoint() {
        for (p, q) in [(1, 2), (2, 5), (5, 3)] {
            assert_eq!(residual_map(p, q, 0.0f64).unwrap(), 0.0);
            assert_eq!(residual_map(p, q, 1.0f64).unwrap(), 1.0);
        }
        assert!(residual_map(2, 2, 1.5f64).is_err());
        assert!(residual_map(2, 2, -0.1f64).is_err());
    }

    #[test]
    fn p1_is_power() {
        assert!((residual_map(1, 3, 0.5f64).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(paper_condition_c(&[0.5f64], 1, 3).unwrap(), 0.125);
        assert_eq!(corrected_h(0.5f64, 1, 3), 0.25);
    }

    #[test]
    fn hand_values_p2_q2() {
        assert!((residual_map(2, 2, 0.5f64).unwrap() - 0.21875).abs() < 1e-15);
        assert!((paper_g(0.5f64, 2, 2) - 0.109375).abs() < 1e-15);
        assert!((corrected_h(0.5f64, 2, 2) - 0.4375).abs() < 1e-15);
        assert!((0.5 * paper_g(0.5f64, 2, 2) - 0.0546875).abs() < 1e-15);
    }

    #[test]
    fn spectrum_checks() {
        assert_eq!(paper_condition_c(&[0.0f64], 3, 4).unwrap(), 0.0);
        assert!(paper_condition_c(&[1.0f64], 2, 2).is_err());
        assert!(corrected_condition_c(&[-1.0f64], 2, 2).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial::<f64>(5, 2), 10.0);
        assert_eq!(binomial::<f64>(6, 6), 1.0);
    }
}

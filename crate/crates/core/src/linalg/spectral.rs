use super::{tridiagonal_eigh, SymMatrix};
use crate::error::{invalid, Error, Result};
use crate::real::Real;

/// `Q diag(f(lambda_i)) Q^T`. Fails when `f` is non-finite at an eigenvalue.
pub fn spectral_function<T: Real>(m: &SymMatrix<T>, f: impl Fn(T) -> T) -> Result<SymMatrix<T>> {
    tridiagonal_eigh(m)?.apply(f)
}

/// Principal inverse p-th root `A^(-1/p)` of an SPD matrix.
pub fn inverse_pth_root<T: Real>(a: &SymMatrix<T>, p: u32) -> Result<SymMatrix<T>> {
    if p == 0 {
        return Err(invalid("p must be at least 1"));
    }
    let dec = tridiagonal_eigh(a)?;
    if a.n() > 0 && dec.min() <= T::zero() {
        return Err(Error::NotPositiveDefinite(dec.min().as_f64()));
    }
    dec.apply(|x| x.inv_root(p))
}

//! Symmetric eigensolvers: cyclic Jacobi, and Householder tridiagonalisation
//! followed by implicit QL (after the EISPACK tred2/tql2 pair).

use super::{Matrix, SymMatrix};
use crate::error::{Error, Result};
use crate::real::Real;

const JACOBI_MAX_SWEEPS: usize = 100;
const QL_MAX_ITER: usize = 100;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    /// `Q diag(f(lambda)) Q^T`, exactly symmetric.
    pub fn apply(&self, f: impl Fn(T) -> T) -> Result<SymMatrix<T>> {
        let n = self.eigenvalues.len();
        let mut fl = Vec::with_capacity(n);
        for &l in &self.eigenvalues {
            let v = f(l);
            if !v.is_finite() {
                return Err(Error::SpectralFunctionUndefined(l.as_f64()));
            }
            fl.push(v);
        }
        let qt = self.eigenvectors.transpose();
        let mut out = Matrix::zeros(n);
        for (k, &fk) in fl.iter().enumerate() {
            if fk == T::zero() {
                continue;
            }
            let row = qt.row(k);
            for i in 0..n {
                let w = row[i] * fk;
                if w == T::zero() {
                    continue;
                }
                for j in i..n {
                    out.data[i * n + j] += w * row[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out.data[i * n + j] = out.data[j * n + i];
            }
        }
        Ok(SymMatrix(out))
    }

    /// `Q diag(lambda) Q^T`.
    pub fn reconstruct(&self) -> SymMatrix<T> {
        self.apply(|x| x).expect("finite eigenvalues")
    }

    /// `|Q^T Q - I|_F`.
    pub fn orthogonality_defect(&self) -> T {
        let q = &self.eigenvectors;
        let mut qtq = super::gram(q);
        qtq.add_diagonal(-T::one());
        qtq.frobenius()
    }

    pub fn min(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }
}

/// Cyclic Jacobi. Stops when the off-diagonal Frobenius norm is at most
/// `max(1e-13, 64 eps) |m|_F`.
pub fn jacobi_eigh<T: Real>(m: &SymMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = m.n();
    let mut a = m.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let rel = T::lit(1e-13).max(T::unit_roundoff() * T::lit(64.0));
    let tol = rel * m.frobenius();

    let off = |a: &Matrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let x = a.data[i * n + j];
                    s += x * x;
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.data[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a.data[p * n + p];
                let aqq = a.data[q * n + q];
                let theta = (aqq - app).quot(apq + apq);
                let t = {
                    let t = T::one().quot(theta.abs() + theta.hypot(T::one()));
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one().quot(t.hypot(T::one()));
                let s = t * c;
                for k in 0..n {
                    let akp = a.data[k * n + p];
                    let akq = a.data[k * n + q];
                    a.data[k * n + p] = c * akp - s * akq;
                    a.data[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a.data[p * n + k];
                    let aqk = a.data[q * n + k];
                    a.data[p * n + k] = c * apk - s * aqk;
                    a.data[q * n + k] = s * apk + c * aqk;
                }
                a.data[p * n + q] = T::zero();
                a.data[q * n + p] = T::zero();
                for k in 0..n {
                    let vkp = v.data[k * n + p];
                    let vkq = v.data[k * n + q];
                    v.data[k * n + p] = c * vkp - s * vkq;
                    v.data[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let values: Vec<T> = (0..n).map(|i| a.data[i * n + i]).collect();
    Ok(sorted(values, Some(v)))
}

/// Householder tridiagonalisation plus implicit QL with eigenvectors.
pub fn tridiagonal_eigh<T: Real>(m: &SymMatrix<T>) -> Result<EigenDecomposition<T>> {
    let (d, v) = tridiagonal_ql(m.as_matrix(), true)?;
    Ok(sorted(d, v))
}

/// Ascending eigenvalues only.
pub fn eigenvalues<T: Real>(m: &SymMatrix<T>) -> Result<Vec<T>> {
    symmetric_eigenvalues(m.as_matrix())
}

/// Ascending eigenvalues of a matrix whose lower triangle defines it.
pub(crate) fn symmetric_eigenvalues<T: Real>(m: &Matrix<T>) -> Result<Vec<T>> {
    let (mut d, _) = tridiagonal_ql(m, false)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(d)
}

fn sorted<T: Real>(values: Vec<T>, vectors: Option<Matrix<T>>) -> EigenDecomposition<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let v = vectors.unwrap_or_else(|| Matrix::identity(n));
    let mut eigenvectors = Matrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors.data[k * n + new] = v.data[k * n + old];
        }
    }
    EigenDecomposition { eigenvalues, eigenvectors }
}

/// Returns unsorted eigenvalues and, when requested, eigenvector columns.
fn tridiagonal_ql<T: Real>(m: &Matrix<T>, vectors: bool) -> Result<(Vec<T>, Option<Matrix<T>>)> {
    let n = m.n();
    if n == 0 {
        return Ok((Vec::new(), vectors.then(|| Matrix::zeros(0))));
    }
    let mut v = m.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(n, &mut v.data, &mut d, &mut e, vectors);
    // Eigenvectors are rotated as rows of V^T so the QL sweeps stay contiguous.
    let mut w = if vectors { Some(v.transpose()) } else { None };
    tql2(n, &mut d, &mut e, w.as_mut().map(|w| w.data.as_mut_slice()))?;
    Ok((d, w.map(|w| w.transpose())))
}

fn tred2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T], vectors: bool) {
    let zero = T::zero();
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }
    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for &dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = zero;
                v[j * n + i] = zero;
            }
        } else {
            for dk in &mut d[..i] {
                *dk = dk.quot(scale);
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in &mut e[..i] {
                *ej = zero;
            }
            for j in 0..i {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for k in j + 1..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] = e[j].quot(h);
                f += e[j] * d[j];
            }
            let hh = f.quot(h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = zero;
            }
        }
        d[i] = h;
    }

    if !vectors {
        for j in 0..n {
            d[j] = v[j * n + j];
        }
        e[0] = zero;
        return;
    }

    for i in 0..n - 1 {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[k * n + i + 1].quot(h);
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g += v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = zero;
    }
    v[(n - 1) * n + n - 1] = T::one();
    e[0] = zero;
}

/// Implicit QL on the tridiagonal `(d, e)`. `w` holds eigenvectors as rows.
fn tql2<T: Real>(n: usize, d: &mut [T], e: &mut [T], mut w: Option<&mut [T]>) -> Result<()> {
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;

    let mut f = zero;
    let mut tst1 = zero;
    let eps = T::unit_roundoff();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    return Err(Error::EigenNoConvergence(iter));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g).quot(two * e[l]);
                let mut r = p.hypot(one);
                if p < zero {
                    r = -r;
                }
                d[l] = e[l].quot(p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i].quot(r);
                    c = p.quot(r);
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(w) = w.as_deref_mut() {
                        let (lo, hi) = w.split_at_mut((i + 1) * n);
                        let wi = &mut lo[i * n..];
                        let wi1 = &mut hi[..n];
                        for (a, b) in wi.iter_mut().zip(wi1.iter_mut()) {
                            let hk = *b;
                            *b = s * *a + c * hk;
                            *a = c * *a - s * hk;
                        }
                    }
                }
                p = (-s * s2 * c3 * el1 * e[l]).quot(dl1);
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = zero;
    }
    Ok(())
}

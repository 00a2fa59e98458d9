//! Dense square matrices, products with a multiplication ledger, and norms.

mod eigen;
mod spectral;

pub use eigen::{eigenvalues, jacobi_eigh, tridiagonal_eigh, EigenDecomposition};
pub(crate) use eigen::symmetric_eigenvalues;
pub use spectral::{inverse_pth_root, spectral_function};

use std::fmt;
use std::ops::{Deref, Index, IndexMut};

use crate::error::{Error, Result};
use crate::real::{symmetry_tolerance, Real};

/// Square row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, T::one())
    }

    pub fn scaled_identity(n: usize, alpha: T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = alpha;
        }
        m
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::BadShape { len: data.len(), expected: n * n });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::BadShape { len: r.len(), expected: n });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { n, data })
    }

    /// Converts entrywise from another scalar type.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(|&x| U::lit(x.as_f64())).collect() }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn scale(&self, alpha: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&x| x * alpha).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Self { n: self.n, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Self { n: self.n, data }
    }

    /// `alpha I - self`.
    pub fn shifted_neg(&self, alpha: T) -> Self {
        let n = self.n;
        let mut m = self.scale(-T::one());
        for i in 0..n {
            m.data[i * n + i] += alpha;
        }
        m
    }

    pub fn add_diagonal(&mut self, alpha: T) {
        for i in 0..self.n {
            self.data[i * self.n + i] += alpha;
        }
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        let n = self.n;
        let mut sums = vec![T::zero(); n];
        for i in 0..n {
            for (s, &x) in sums.iter_mut().zip(self.row(i)) {
                *s += x.abs();
            }
        }
        sums.into_iter().fold(T::zero(), T::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| self.row(i).iter().fold(T::zero(), |acc, &x| acc + x.abs()))
            .fold(T::zero(), T::max)
    }

    /// Spectral norm `sqrt(lambda_max(M^T M))`. The Gram product is not
    /// charged to any ledger.
    pub fn norm_two(&self) -> Result<T> {
        let g = gram(self);
        let values = eigen::symmetric_eigenvalues(&g)?;
        Ok(values.last().copied().unwrap_or_else(T::zero).max(T::zero()).sqrt())
    }

    /// Largest `|a_ij - a_ji|` and its position.
    pub fn asymmetry(&self) -> (usize, usize, T) {
        let n = self.n;
        let mut worst = (0, 0, T::zero());
        for i in 0..n {
            for j in i + 1..n {
                let gap = (self.data[i * n + j] - self.data[j * n + i]).abs();
                if gap > worst.2 {
                    worst = (i, j, gap);
                }
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        let (_, _, gap) = self.asymmetry();
        gap <= symmetry_tolerance::<T>() * T::one().max(self.max_abs())
    }

    /// `(M + M^T) / 2`.
    pub fn symmetrize(&self) -> Self {
        let n = self.n;
        let half = T::lit(0.5);
        let mut m = self.clone();
        for i in 0..n {
            for j in i + 1..n {
                let v = (self.data[i * n + j] + self.data[j * n + i]) * half;
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    /// Fraction of entries that are exactly non-zero.
    pub fn density(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let nnz = self.data.iter().filter(|&&x| x != T::zero()).count();
        nnz as f64 / (self.n * self.n) as f64
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n, self.n)?;
        for row in self.data.chunks(self.n.max(1)) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Symmetric matrix; symmetry is checked on construction.
#[derive(Clone, PartialEq)]
pub struct SymMatrix<T>(Matrix<T>);

impl<T: Real> SymMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        let (i, j, gap) = m.asymmetry();
        let tol = symmetry_tolerance::<T>() * T::one().max(m.max_abs());
        if gap > tol {
            return Err(Error::NotSymmetric { i, j, gap: gap.as_f64(), tol: tol.as_f64() });
        }
        Ok(Self(m))
    }

    /// Symmetrizes `m` without checking how far from symmetric it was.
    pub fn from_symmetrized(m: &Matrix<T>) -> Self {
        Self(m.symmetrize())
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn scaled_identity(n: usize, alpha: T) -> Self {
        Self(Matrix::scaled_identity(n, alpha))
    }

    pub fn diag(values: &[T]) -> Self {
        Self(Matrix::diag(values))
    }

    pub fn scale(&self, alpha: T) -> Self {
        Self(self.0.scale(alpha))
    }

    pub fn cast<U: Real>(&self) -> SymMatrix<U> {
        SymMatrix(self.0.cast())
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }
}

impl<T> Deref for SymMatrix<T> {
    type Target = Matrix<T>;
    fn deref(&self) -> &Matrix<T> {
        &self.0
    }
}

impl<T: fmt::Debug> fmt::Debug for SymMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym{:?}", self.0)
    }
}

/// Count of full n×n matrix products.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MultLedger {
    pub count: u64,
}

impl MultLedger {
    pub fn new() -> Self {
        Self::default()
    }
}

/// `a * b`, charging one product to `ledger`.
pub fn mat_mul<T: Real>(a: &Matrix<T>, b: &Matrix<T>, ledger: &mut MultLedger) -> Result<Matrix<T>> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    ledger.count += 1;
    Ok(multiply(a, b))
}

/// Uncounted product.
pub(crate) fn multiply<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.n;
    let mut c = Matrix::zeros(n);
    for i in 0..n {
        let out = &mut c.data[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a.data[i * n + k];
            if aik == T::zero() {
                continue;
            }
            for (o, &bkj) in out.iter_mut().zip(&b.data[k * n..(k + 1) * n]) {
                *o += aik * bkj;
            }
        }
    }
    c
}

/// `M^T M`, exactly symmetric.
pub(crate) fn gram<T: Real>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.n;
    let mut g = Matrix::zeros(n);
    for k in 0..n {
        let row = m.row(k);
        for i in 0..n {
            let mki = row[i];
            if mki == T::zero() {
                continue;
            }
            let out = &mut g.data[i * n + i..(i + 1) * n];
            for (o, &mkj) in out.iter_mut().zip(&row[i..]) {
                *o += mki * mkj;
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            g.data[i * n + j] = g.data[j * n + i];
        }
    }
    g
}

/// Largest absolute eigenvalue of a symmetric matrix.
pub fn norm_two_sym<T: Real>(m: &SymMatrix<T>) -> Result<T> {
    let values = eigenvalues(m)?;
    Ok(match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) => lo.abs().max(hi.abs()),
        _ => T::zero(),
    })
}

//! Seeded random SPD matrices with prescribed size, density, condition
//! number and spectral radius.
//!
//! The spectrum is fixed first (`1`, `1/cond` and `n - 2` log-uniform values
//! in between), then random Givens similarities are applied to `diag(lambda)`
//! until the density target is met, and finally the matrix is scaled to the
//! requested spectral radius. Randomness comes from ChaCha8 seeded with
//! `seed_from_u64(seed)`; uniforms use the top 53 bits of each `u64`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{invalid, Error, Result};
use crate::linalg::{eigenvalues, Matrix, SymMatrix};

/// Rotation budget per `n^2`.
const ROTATION_CAP_FACTOR: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixSpec {
    pub n: usize,
    pub density: f64,
    pub cond: f64,
    pub spectral_radius: f64,
    pub seed: u64,
}

impl MatrixSpec {
    pub fn new(n: usize, density: f64, cond: f64, spectral_radius: f64, seed: u64) -> Self {
        Self { n, density, cond, spectral_radius, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be positive"));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(invalid(format!("density must lie in (0, 1], got {}", self.density)));
        }
        if self.density * ((self.n * self.n) as f64) < self.n as f64 * (1.0 - 1e-12) {
            return Err(invalid(format!(
                "density {} is below the diagonal's own density 1/n = {}",
                self.density,
                1.0 / self.n as f64
            )));
        }
        if !(self.cond >= 1.0) || !self.cond.is_finite() {
            return Err(invalid(format!("cond must be >= 1, got {}", self.cond)));
        }
        if self.n == 1 && self.cond != 1.0 {
            return Err(invalid("a 1x1 matrix has cond 1"));
        }
        if !(self.spectral_radius > 0.0) || !self.spectral_radius.is_finite() {
            return Err(invalid(format!("spectral radius must be positive, got {}", self.spectral_radius)));
        }
        Ok(())
    }
}

impl std::str::FromStr for MatrixSpec {
    type Err = Error;

    /// Parses `n,density,cond,rho,seed`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(invalid(format!("spec must be n,density,cond,rho,seed, got {s:?}")));
        }
        let num = |i: usize, name: &str| -> Result<f64> {
            parts[i].parse::<f64>().map_err(|_| invalid(format!("spec {name} is not a number: {:?}", parts[i])))
        };
        let n = parts[0].parse::<usize>().map_err(|_| invalid(format!("spec n is not a count: {:?}", parts[0])))?;
        let seed =
            parts[4].parse::<u64>().map_err(|_| invalid(format!("spec seed is not an integer: {:?}", parts[4])))?;
        let spec = Self::new(n, num(1, "density")?, num(2, "cond")?, num(3, "rho")?, seed);
        spec.validate()?;
        Ok(spec)
    }
}

impl std::fmt::Display for MatrixSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{},{}", self.n, self.density, self.cond, self.spectral_radius, self.seed)
    }
}

struct Stream(ChaCha8Rng);

impl Stream {
    fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..n`.
    fn index(&mut self, n: usize) -> usize {
        ((self.0.next_u64() as u128 * n as u128) >> 64) as usize
    }
}

fn spectrum(n: usize, cond: f64, rng: &mut Stream) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    let lo = 1.0 / cond;
    let mut lam = vec![1.0, lo];
    let ln_lo = lo.ln();
    for _ in 2..n {
        lam.push((ln_lo * (1.0 - rng.uniform())).exp());
    }
    lam
}

/// Non-zeros in rows and columns `i`, `j`.
fn cross_nnz(a: &Matrix<f64>, i: usize, j: usize) -> usize {
    let n = a.n();
    let mut c = 0;
    for k in 0..n {
        c += (a[(i, k)] != 0.0) as usize + (a[(j, k)] != 0.0) as usize;
        if k != i && k != j {
            c += (a[(k, i)] != 0.0) as usize + (a[(k, j)] != 0.0) as usize;
        }
    }
    c
}

/// `A <- G^T A G` for the rotation in the `(i, j)` plane.
fn rotate(a: &mut Matrix<f64>, i: usize, j: usize, c: f64, s: f64) {
    let n = a.n();
    for k in 0..n {
        if k == i || k == j {
            continue;
        }
        let aki = a[(k, i)];
        let akj = a[(k, j)];
        let ni = c * aki - s * akj;
        let nj = s * aki + c * akj;
        a[(k, i)] = ni;
        a[(i, k)] = ni;
        a[(k, j)] = nj;
        a[(j, k)] = nj;
    }
    let (aii, ajj, aij) = (a[(i, i)], a[(j, j)], a[(i, j)]);
    a[(i, i)] = c * c * aii - 2.0 * c * s * aij + s * s * ajj;
    a[(j, j)] = s * s * aii + 2.0 * c * s * aij + c * c * ajj;
    let off = c * s * (aii - ajj) + (c * c - s * s) * aij;
    a[(i, j)] = off;
    a[(j, i)] = off;
}

pub fn generate_spd(spec: &MatrixSpec) -> Result<SymMatrix<f64>> {
    spec.validate()?;
    let n = spec.n;
    if spec.cond == 1.0 {
        // every orthogonal similarity of I is I
        return Ok(SymMatrix::scaled_identity(n, spec.spectral_radius));
    }
    let mut rng = Stream::new(spec.seed);
    let lam = spectrum(n, spec.cond, &mut rng);
    let mut a = Matrix::diag(&lam);

    let total = (n * n) as f64;
    let mut nnz = n;
    let cap = ROTATION_CAP_FACTOR * n * n;
    let mut rotations = 0;
    while (nnz as f64) / total < spec.density {
        if rotations == cap {
            return Err(Error::DensityUnreachable { target: spec.density, rotations });
        }
        let i = rng.index(n);
        let mut j = rng.index(n - 1);
        if j >= i {
            j += 1;
        }
        let theta = 2.0 * std::f64::consts::PI * rng.uniform();
        let before = cross_nnz(&a, i, j);
        rotate(&mut a, i, j, theta.cos(), theta.sin());
        nnz = nnz + cross_nnz(&a, i, j) - before;
        rotations += 1;
    }

    let a = SymMatrix::from_symmetrized(&a);
    let top = *eigenvalues(&a)?.last().expect("n >= 1");
    Ok(a.scale(spec.spectral_radius / top))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub density: f64,
    pub cond: f64,
    pub rho: f64,
}

/// Density, condition number and spectral radius of an SPD matrix.
pub fn measure(a: &SymMatrix<f64>) -> Result<Measurement> {
    let values = eigenvalues(a)?;
    let (lo, hi) = match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(invalid("matrix is empty")),
    };
    if lo <= 0.0 {
        return Err(Error::NotPositiveDefinite(lo));
    }
    Ok(Measurement { density: a.density(), cond: hi / lo, rho: hi })
}

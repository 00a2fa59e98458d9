use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix data has {len} entries, expected {expected}")]
    BadShape { len: usize, expected: usize },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e} exceeds {tol:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64, tol: f64 },

    #[error("matrix is not positive definite: smallest eigenvalue is {0:e}")]
    NotPositiveDefinite(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    EigenNoConvergence(usize),

    #[error("spectral function is undefined at eigenvalue {0:e}")]
    SpectralFunctionUndefined(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("commutation violated: |BA - AB|_F = {gap:e} exceeds {bound:e}")]
    CommutationViolated { gap: f64, bound: f64 },

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("value {value} is outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("every q in the range diverged or failed to converge")]
    AllDiverged,

    #[error("density {target} unreachable within {rotations} rotations")]
    DensityUnreachable { target: f64, rotations: usize },

    #[error("ground truth unavailable: the run did not track errors")]
    GroundTruthUnavailable,

    #[error("matrix market, line {line}: {msg}")]
    MatrixMarket { line: usize, msg: String },

    #[error("config, line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (asymmetry residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("order k={k} out of range for n={n}")]
    OrderOutOfRange { k: usize, n: usize },

    #[error("outside the admissible cone: {0}")]
    OutsideCone(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("point lies on the singular set (|z''| = {norm:.3e})")]
    SingularSet { norm: f64 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_order(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::OrderOutOfRange { k, n })
    } else {
        Ok(())
    }
}

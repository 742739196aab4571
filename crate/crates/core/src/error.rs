use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("leading {0}x{0} block is singular")]
    SingularBlock(usize),

    #[error("eigenvalue iteration did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertices {0} and {1} are adjacent; set is not independent")]
    NotIndependent(usize, usize),

    #[error("search exceeded its node budget of {0}")]
    BudgetExceeded(u64),

    #[error("matrix {0} is not symmetric")]
    NotSymmetric(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:e}, max {max_eig:e})")]
    NotPsd { min_eig: f64, max_eig: f64 },

    #[error("theta SDP did not reach optimality (status {0})")]
    ThetaFailed(String),

    #[error("heuristic failed: {0}")]
    HeuristicFailed(String),

    #[error("numerical rank {rank} exceeds requested dimension {dim}")]
    RankTooHigh { rank: usize, dim: usize },

    #[error("matrix is not feasible for the theta SDP (residual {0:e})")]
    NotThetaFeasible(f64),

    #[error("inconsistent realization: {0}")]
    InconsistentRealization(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

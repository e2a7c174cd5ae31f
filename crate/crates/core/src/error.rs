use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{face:?} is not a codimension-1 face of {simplex:?}")]
    NotAFace { simplex: Vec<u32>, face: Vec<u32> },

    #[error("simplices {0:?} and {1:?} do not span a simplex one dimension higher")]
    NotAdjacent(Vec<u32>, Vec<u32>),

    #[error("complex is not strongly connected")]
    NotStronglyConnected,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("enumeration budget of {budget} states exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("covariance table is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("zero variance in statistic {0}")]
    ZeroVariance(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

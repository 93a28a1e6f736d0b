use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot contract a scalar")]
    ContractScalar,
    #[error("exp_nilpotent requires nilpotent input")]
    NotNilpotent,
    #[error("split implemented over the rationals only")]
    IrrationalSplit,
    #[error("rank-one perturbation requires α(v)=0")]
    NotOrthogonal,
    #[error("perturbation coefficients must be even functions of s")]
    OddCoefficient,
    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("invalid index set: {0}")]
    InvalidIndices(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

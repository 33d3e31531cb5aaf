use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum KlError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size mismatch: S_{left} vs S_{right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range for S_{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{v} is not below {w} in Bruhat order")]
    NotBelow { v: Permutation, w: Permutation },
    #[error("S-pair budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("dream is not reduced: {0}")]
    NotReduced(String),
    #[error("partition {inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, KlError>;

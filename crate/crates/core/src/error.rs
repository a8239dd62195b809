use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands belong to different presentations ({0} vs {1})")]
    PresentationMismatch(String, String),
    #[error("rewrite step budget of {0} exceeded; the presentation is probably not terminating")]
    StepBudgetExceeded(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("element is not central: {0}")]
    NotCentral(String),
    #[error("normal form is not normalized: g^-1(nu (x) nu) reduces to {0}")]
    NotNormalized(String),
    #[error("assumption certificate missing or failed")]
    CertificateMissing,
    #[error("closed form mismatch in {clause}: residual {residual}")]
    GoldenMismatch { clause: String, residual: String },
    #[error("sector ({m}, {n}) is not preserved by the operator")]
    SectorEscape { m: i64, n: i64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

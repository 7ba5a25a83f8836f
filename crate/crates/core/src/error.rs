use thiserror::Error;

/// Errors raised by the counting, geometry and dynamics routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid digit set: {0}")]
    InvalidDigitSet(String),

    #[error("{0} is not a member of the digit set")]
    NotAMember(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("invalid scale {0}: expected 0 < r <= 1")]
    InvalidScale(String),

    #[error("degenerate plane: the normal (c1, c2, c3) is zero")]
    DegeneratePlane,

    #[error("precision exhausted at {bits} bits while deciding {what}")]
    PrecisionExhausted { bits: u32, what: String },

    #[error("curvature vanishes at t = {t}")]
    ZeroCurvature { t: f64 },

    #[error("invalid geometry instance: {0}")]
    InvalidInstance(String),

    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

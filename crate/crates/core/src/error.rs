use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is not supported here (expected {1})")]
    Dimension(usize, &'static str),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("vector is not a unit vector (|omega| = {0})")]
    NotUnit(f64),

    #[error("t = {t} lies outside the sampled range [{min}, {max}]")]
    OutOfRange { t: f64, min: f64, max: f64 },

    #[error("t grid is not symmetric about 0 (t_min = {0}, t_max = {1})")]
    AsymmetricGrid(f64, f64),

    #[error("non-finite value encountered at {0}")]
    NonFinite(String),

    #[error("parity mismatch: {0}")]
    Parity(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}

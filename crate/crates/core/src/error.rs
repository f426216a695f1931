use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e} after {segments} segments)")]
    QuadratureFailed { tol: f64, estimate: f64, segments: usize },

    #[error("no decay envelope available for `{0}`; a tail bound is required to integrate over the line")]
    MissingTailBound(String),

    #[error("nonpositive mass weight {value:e} at grid index {index}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("mode cutoff unavailable ({0}); supply an explicit k_max")]
    CutoffUnavailable(&'static str),

    #[error("even-symmetry argument unavailable: {0}")]
    NotEven(&'static str),

    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("nonpositive value {value:e} at L = {l}; cannot take logarithm")]
    NonPositiveValue { l: f64, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

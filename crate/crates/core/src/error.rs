use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution spec `{spec}`: {reason}")]
    DistributionSpec { spec: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} refused: {detail}")]
    CapExceeded { what: &'static str, detail: String },

    #[error("expansion coefficient does not exist: the integral of p^{r} diverges")]
    CoefficientDoesNotExist { r: usize },

    #[error("lemma violation: no unimodular pivot while eliminating the equations of {rgs}")]
    LemmaViolation { rgs: String },

    #[error("malformed partition equations: {0}")]
    MalformedEquations(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("bound inapplicable: {0}")]
    BoundInapplicable(String),

    #[error("density precondition violated: {0}")]
    DensityPrecondition(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

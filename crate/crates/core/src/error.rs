use crate::domain::Domain;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain mismatch: expected {expected:?}, got {got:?}")]
    DomainMismatch { expected: Domain, got: Domain },

    #[error("operation is not defined on {0:?}")]
    UnsupportedDomain(Domain),

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("serialized step function is malformed: {0}")]
    ParseStepFunction(String),

    #[error("evaluation overflowed the dyadic grid: {0}")]
    GridOverflow(String),

    #[error("estimate did not converge: {0}")]
    NotConverged(String),

    #[error("space contains only the zero function: {0}")]
    TrivialSpace(String),

    #[error("boundary cells carry {share:.3}% of the discretised norm; widen the window")]
    TruncationDominant { share: f64 },

    #[error("discrete representation does not reassemble the input (residual {residual:.3e})")]
    RepresentationFailed { residual: f64 },

    #[error("constructed inverse is not strictly monotone: {0}")]
    NonMonotoneInverse(String),

    #[error("exponents violate the convolution scaling identity: 1/{p} + 1/{q} != 1 + 1/{r}")]
    ExponentMismatch { p: f64, q: f64, r: f64 },

    #[error("input degree {got} exceeds multiplier symbol support {support}")]
    DegreeOverflow { got: i64, support: i64 },

    #[error("search budget must be positive")]
    EmptyBudget,

    #[error("config error at {line}:{col}: {msg}")]
    Config { line: usize, col: usize, msg: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("endpoint certification failed: {0}")]
    EndpointCertification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Config { line, col, msg: msg.into() }
    }
}

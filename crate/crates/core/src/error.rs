use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric positive-definite: {0}")]
    NotPositiveDefinite(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("singular innovation covariance for predicted component {index}")]
    SingularInnovation { index: usize },

    #[error("degenerate update: {0}")]
    DegenerateUpdate(String),

    #[error("degenerate fusion: {0}")]
    DegenerateFusion(String),

    #[error("cluster {0} has no participating node")]
    EmptyCluster(usize),

    #[error("cluster {cluster} has {count} participating nodes; pairwise fusion takes at most 2")]
    TooManyParticipants { cluster: usize, count: usize },

    #[error("component index ({node}, {component}) is out of range")]
    IndexOutOfRange { node: usize, component: usize },

    #[error("ellipsoid disjointness requires delta <= rho/4 (delta = {delta}, rho/4 = {limit})")]
    BoundPrecondition { delta: f64, limit: f64 },
}

impl Error {
    /// Wraps `self` with a description of where it happened.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Whether the error stems from configuration rather than numerics.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config { .. } => true,
            Error::Context { source, .. } => source.is_config(),
            _ => false,
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The three terminals do not form a genuine triangle.
    #[error("invalid terminal triangle: {0}")]
    InvalidTriangle(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange { what: &'static str, value: f64, lo: f64, hi: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no convergence after {iterations} iterations (last step {step:e})")]
    NoConvergence { iterations: usize, step: f64 },

    #[error("root finding failed: {0}")]
    RootFindingFailure(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("at budget {budget}: {source}")]
    AtBudget {
        budget: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any budget context, returning the underlying failure.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtBudget { source, .. } => source.root(),
            other => other,
        }
    }
}

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },
    #[error("operator trace {trace} differs from 1")]
    NotNormalized { trace: f64 },
    #[error("Bloch vector length {norm} exceeds 1")]
    InvalidBloch { norm: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("measurement direction is not a unit vector (length {norm})")]
    InvalidDirection { norm: f64 },
    #[error("unknown case {0}; expected 1, 2 or 3")]
    UnknownCase(u32),
    #[error("no closed form for case {case} on link {link}")]
    UnknownCaseLink { case: u32, link: String },
    #[error("invalid mixture weights: {0}")]
    InvalidMixtureWeights(String),
    #[error("LHS solver stalled: {0}")]
    SolverStall(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("radius does not cross 1 on [{lo}, {hi}]")]
    NoCrossing { lo: f64, hi: f64 },
    #[error("radius is not monotone on the scanned interval")]
    NonMonotone,
    #[error("link {link}: {source}")]
    Link {
        link: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_link(self, link: impl Into<String>) -> Self {
        Error::Link { link: link.into(), source: Box::new(self) }
    }

    /// Strips link context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Link { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self.root(), Error::SolverStall(_) | Error::NumericalFailure(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

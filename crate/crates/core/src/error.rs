use thiserror::Error;

/// Errors raised by the series engines.
///
/// The `Consistency`, `Integrality` and `Enumeration` variants signal bugs or
/// mis-parametrized identities rather than bad user input; the CLI maps them to
/// a distinct exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divergent product: {0}")]
    DivergentProduct(String),

    #[error("series is not invertible: {0}")]
    NonUnit(String),

    #[error("an explicit truncation order is required: {0}")]
    UnboundedOrder(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rejected specialization: {0}")]
    RejectedSpecialization(String),

    #[error("integrality violation: {0}")]
    Integrality(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("enumeration bound violated: {0}")]
    Enumeration(String),

    #[error("exact division left a remainder: {0}")]
    InexactDivision(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures that indicate an arithmetic or parametrization bug.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Consistency(_) | Error::Integrality(_) | Error::Enumeration(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

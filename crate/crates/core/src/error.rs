use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
pub struct DimensionError {
    pub context: String,
    pub expected: usize,
    pub actual: usize,
}

impl DimensionError {
    pub fn new(context: impl Into<String>, expected: usize, actual: usize) -> Self {
        Self { context: context.into(), expected, actual }
    }
}

/// A solver declined an instance because its search space is too large.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "{solver} refused Nt={nt}: {base}^{exponent} candidate vectors (~{multiplications} real \
     multiplications) exceed the cap of 2Nt <= {cap}"
)]
pub struct SolverRefusal {
    pub solver: String,
    pub nt: usize,
    pub cap: usize,
    pub base: u32,
    pub exponent: usize,
    /// Closed-form multiplication count, as a decimal string.
    pub multiplications: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("invalid constellation order {0}")]
    InvalidOrder(usize),
    #[error("message index {index} out of range for {order}-PSK")]
    InvalidMessage { index: usize, order: usize },
    #[error(transparent)]
    Refusal(#[from] SolverRefusal),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

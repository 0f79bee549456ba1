use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid POVM element: {0}")]
    InvalidPovm(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range for {what} of size {size}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("not a partition: {0}")]
    InvalidPartition(String),

    #[error("missing channel entry for input tuple {0:?}")]
    MissingChannelEntry(Vec<usize>),

    #[error("model field `{field}`: {message}")]
    Model { field: String, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` has zero coefficient in the substituted equality")]
    ZeroCoefficient(String),

    #[error("cannot parse quantity `{0}`: {1}")]
    QuantityParse(String, String),

    #[error("budget exceeded: {what} needs {needed} but the budget is {budget}")]
    Budget {
        what: String,
        needed: f64,
        budget: f64,
    },
}

impl Error {
    pub(crate) fn model(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Model {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Budget violations are reported separately from validation failures.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

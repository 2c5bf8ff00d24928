use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown Lie algebra family `{0}`")]
    UnknownFamily(String),

    #[error("{family}: parameter constraint violated: {constraint}")]
    ParameterOutOfRange { family: String, constraint: String },

    #[error("{family}: missing parameter `{param}`")]
    MissingParameter { family: String, param: String },

    #[error("{family}: unexpected parameter `{param}`")]
    UnexpectedParameter { family: String, param: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("inner product is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid algebra definition: {0}")]
    InvalidAlgebra(String),

    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("signature tables are only defined in dimension 4 (got {0})")]
    NotFourDimensional(usize),

    #[error("tracked eigenvalue does not change sign on the bracket")]
    NoSignChange,

    #[error("{0} is unimodular")]
    NotNonUnimodular(String),

    #[error("serialization: {0}")]
    Serde(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mode space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n} photons exceeds the configured limit of {max}")]
    PhotonLimit { n: usize, max: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("non-finite amplitude in state")]
    NonFinite,

    #[error("non-generic scattering matrix: {0}")]
    NonGeneric(String),

    #[error("no generic sample found after {attempts} attempts; genericity floor may be too large")]
    SamplingFailed { attempts: usize },

    #[error("lifted sample is not diagonalizable within tolerance")]
    Defective,

    #[error("protected candidate set did not stabilize within {samples} samples")]
    Inconclusive { samples: usize },

    #[error("state is not protected (residual {residual:e})")]
    NotProtected { residual: f64 },

    #[error("invalid state recipe: {0}")]
    InvalidRecipe(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

//! Crate-wide error type.

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed bounds for dimension {dim}: lo {lo} >= hi {hi}")]
    InvalidBounds { dim: usize, lo: f64, hi: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("swarm is empty")]
    EmptySwarm,

    #[error("cost function returned non-finite value {value} at state {state:?}")]
    NonFiniteCost { state: Vec<f64>, value: f64 },

    #[error("likelihood at index {index} is negative or non-finite: {value}")]
    InvalidLikelihood { index: usize, value: f64 },

    #[error("weights are not normalized: sum = {sum}")]
    UnnormalizedWeights { sum: f64 },

    #[error("iteration {t} outside schedule range [0, {t_max}]")]
    IterationOutOfRange { t: usize, t_max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("sequence has {0} frame(s); at least 2 required")]
    SequenceTooShort(usize),

    #[error("observation model '{model}' cannot score a {mode} sequence")]
    ModelMismatch { model: String, mode: String },

    #[error("invalid metric input: {0}")]
    InvalidMetricInput(String),

    #[error("malformed sequence files: {0}")]
    SequenceFormat(String),

    #[error("failed to parse {path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by invalid user input (configs, flags,
    /// scenario parameters) rather than runtime failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidBounds { .. }
                | Error::DimensionMismatch { .. }
                | Error::EmptySwarm
                | Error::InvalidLikelihood { .. }
                | Error::UnnormalizedWeights { .. }
                | Error::IterationOutOfRange { .. }
                | Error::InvalidConfig(_)
                | Error::InvalidScenario(_)
                | Error::SequenceTooShort(_)
                | Error::ModelMismatch { .. }
                | Error::InvalidMetricInput(_)
        )
    }
}

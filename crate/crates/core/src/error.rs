use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape sizes must all be at least 1, got ({bob}, {alice}, {eve})")]
    InvalidShape { bob: usize, alice: usize, eve: usize },
    #[error("expected {expected} cells, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("entries sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("marginal over a variable paired with itself")]
    SameVariable,
    #[error("Dirichlet concentration must be positive, got {0}")]
    NonPositiveConcentration(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("epsilon {0} is outside the admissible range")]
    EpsilonOutOfRange(f64),
    #[error("verification failed, largest deviation {max_deviation:e}")]
    VerificationFailed { max_deviation: f64 },
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("no restart ended at a feasible point")]
    NoFeasiblePoint,
    #[error("grid too large: {cells} cells at resolution {resolution}")]
    TooLarge { cells: usize, resolution: usize },
    #[error("need at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("distribution file is invalid")]
    Validation(#[source] Box<Error>),
    #[error("axis order must be \"bob,alice,eve\", got {0:?}")]
    WrongOrder(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

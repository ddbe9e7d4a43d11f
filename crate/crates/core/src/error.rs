use thiserror::Error;

/// Errors raised by the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("uncertainty set is empty or degenerate: {0}")]
    DegenerateSet(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("model violates the constant-support assumption")]
    NotConstantSupport,
    #[error("model is not polytopic")]
    NotPolytopic,
    #[error("objective not supported here: {0}")]
    UnsupportedObjective(String),
    #[error("no minimum transition probability available and no floor configured")]
    PminUnknown,
    #[error("iteration limit of {0} sweeps reached")]
    IterationLimit(u64),
    #[error("discount factor {0} is not in (0, 1)")]
    GammaOutOfRange(f64),
    #[error("missing stay value for end component {0}")]
    MissingStayValue(usize),
    #[error("state set is not an end component: {0}")]
    NotAnEc(String),
    #[error("solve report is not converged")]
    NotConverged,
    #[error("uncertainty set is not given by vertices: state {state}, action {action}")]
    NotVRep { state: usize, action: usize },
    #[error("instance too large for the reference oracle: {0}")]
    TooLarge(String),
    #[error("invalid model:\n{0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

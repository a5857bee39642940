use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different coefficient rings ({0} vs {1})")]
    RingMismatch(String, String),

    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),

    #[error("denominator not invertible in the target ring{}", index_suffix(*.index))]
    NonInvertibleDenominator { index: Option<usize> },

    #[error("element is not a unit")]
    NonInvertibleElement,

    #[error("leading coefficient of the series is not a unit")]
    NonInvertibleLeadingCoefficient,

    #[error("operation needs a field, got {0}")]
    UnsupportedRing(String),

    #[error("linear system has no solution")]
    NoSolution,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("precision too low: need at least {needed} coefficients, have {got}")]
    PrecisionTooLow { needed: usize, got: usize },

    #[error("forms are not linearly independent at the working precision (rank {rank} < {expected})")]
    IndependenceFailure { rank: usize, expected: usize },

    #[error("Hecke image is not in the span of the basis at precision {0}")]
    NotStable(usize),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn index_suffix(index: Option<usize>) -> String {
    match index {
        Some(n) => format!(" (coefficient index {n})"),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("zero is not allowed here: {0}")]
    ZeroInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A resultant or elimination step had an identically vanishing input.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("elimination degenerate for every coordinate pair: {0}")]
    DegenerateElimination(String),

    #[error("curve lies in a proper coset ({status}), relation {relation:?}")]
    CurveIsCoset { status: String, relation: Vec<i64> },

    #[error("hypothesis not met: |L| = {norm} does not exceed threshold {threshold}")]
    HypothesisNotMet { norm: f64, threshold: f64 },

    /// The certificate search came back empty even though existence is guaranteed.
    #[error("no certificate found (implementation bug)")]
    NoCertificateFound,

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("could not factor integer {0}")]
    IntegerFactorization(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

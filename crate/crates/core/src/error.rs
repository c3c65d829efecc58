use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A fixed capacity (polynomial degree, Bessel argument range) was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid channel: {0}")]
    Channel(String),
    #[error("configuration error: {0}")]
    Config(String),
    /// Input violates a hypothesis the diagnostic relies on.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("not converged: Cauchy defect {defect:.3e} exceeds threshold {threshold:.3e}")]
    Convergence { defect: f64, threshold: f64 },
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// A potential failed its admissibility checks.
    #[error("potential refused: {0}")]
    Refused(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}

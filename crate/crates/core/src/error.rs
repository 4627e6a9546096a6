use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid parameters, unknown mode labels, mismatched bases.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("basis dimension {dimension} exceeds the cap of {cap}")]
    DimensionCap { dimension: u128, cap: usize },

    /// Assembled operator failed the Hermiticity check.
    #[error(
        "operator is not Hermitian at ({row}, {col}): {value} vs conjugate mirror {mirror} (defect {defect:.3e})"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        value: String,
        mirror: String,
        defect: f64,
    },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:.3e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error("bracket ({lo}, {hi}) does not enclose a gap minimum: {reason}")]
    Bracket { lo: f64, hi: f64, reason: String },

    /// A sweep point failed; carries the grid context.
    #[error("at {parameter} = {value} (grid index {index}): {source}")]
    AtGridPoint {
        parameter: String,
        value: f64,
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by bad input rather than numerical failure.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config(_) | Error::DimensionCap { .. } | Error::Bracket { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_config(),
            _ => false,
        }
    }
}

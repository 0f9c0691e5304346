//! Error type shared across the crate.

use crate::network::NodePair;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A Hermitian-only operation received a matrix whose max asymmetry
    /// `|m[i][j] - conj(m[j][i])|` exceeds the tolerance.
    #[error("matrix is not Hermitian (asymmetry {defect:.3e})")]
    NonHermitian { defect: f64 },

    /// An operation expected a matrix of a different size.
    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    /// A qubit subset passed to a partial trace is empty, out of range,
    /// repeated, or not strictly increasing.
    #[error("invalid qubit subset: {0}")]
    BadSubset(String),

    /// A matrix claimed to be a density operator fails validation.
    #[error("not a valid density operator: {0}")]
    InvalidDensity(String),

    /// A spectrum dipped below the tolerated negative floor.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// Closed-form channel states exist only for pairs (2,3) and (2,4).
    #[error("no closed form for node pair {0}; only 2-3 and 2-4 are covered")]
    UnsupportedPair(NodePair),

    /// Unknown figure preset name.
    #[error("unknown preset `{0}` (expected fig2, fig3, fig4 or fig5)")]
    UnknownPreset(String),

    /// Invalid sweep configuration or malformed serialized data.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

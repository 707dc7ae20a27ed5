use thiserror::Error;

/// Errors raised by the spin-module algebra, the model geometries and the
/// numerical kernel.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size out of range: {0}")]
    Size(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("index {index} out of range {min}..={max}")]
    Index { index: i64, min: i64, max: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("point outside chart domain: |z| = {modulus} exceeds {limit}")]
    ChartDomain { modulus: f64, limit: f64 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_index(index: usize, min: usize, max: usize) -> Result<()> {
    if index < min || index > max {
        return Err(Error::Index {
            index: index as i64,
            min: min as i64,
            max: max as i64,
        });
    }
    Ok(())
}

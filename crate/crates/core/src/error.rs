use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MahlerError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular point: {0}")]
    Singular(String),

    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    RootNonConvergence { iterations: usize, worst_residual: f64 },

    #[error("regularity failure at toric point n={modulus} k={k} k'={k_prime}: {reason}")]
    Regularity {
        modulus: u32,
        k: u32,
        k_prime: u32,
        reason: String,
    },

    #[error("branch continuation failed at t={t}: {reason}")]
    Continuation { t: f64, reason: String },

    #[error("oracle failed at theta={theta}: {source}")]
    Oracle {
        theta: f64,
        #[source]
        source: Box<MahlerError>,
    },

    #[error("invalid quadrature configuration: {0}")]
    Quadrature(String),
}

impl MahlerError {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            MahlerError::Domain(_) | MahlerError::Quadrature(_) => false,
            MahlerError::Singular(_)
            | MahlerError::RootNonConvergence { .. }
            | MahlerError::Regularity { .. }
            | MahlerError::Continuation { .. }
            | MahlerError::Oracle { .. } => true,
        }
    }
}

pub type Result<T> = std::result::Result<T, MahlerError>;

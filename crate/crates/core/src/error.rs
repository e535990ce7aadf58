use thiserror::Error;

/// Errors raised by basis construction, evaluation and quadrature.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quantum number, argument or parameter lies outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Arguments are individually valid but do not fit together
    /// (space mismatch, mixed family kinds, differing spins).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// Direct evaluation at r = 0 of a barred orbital whose weight diverges there.
    #[error("pole at origin: {0}")]
    PoleAtOrigin(String),

    #[error("non-finite integrand value at node {index} (radius {radius})")]
    NonFinite { index: usize, radius: f64 },

    /// Quadrature rule construction failed (eigenvalue iteration did not converge).
    #[error("quadrature construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

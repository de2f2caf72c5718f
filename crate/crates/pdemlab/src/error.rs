use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum PdemError {
    /// An input is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure (quadrature, eigensolve, linear solve, root
    /// search) failed to converge to the requested tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A grid is too coarse or otherwise unusable for the operation.
    #[error("grid error: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, PdemError>;

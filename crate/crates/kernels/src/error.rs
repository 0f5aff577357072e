use polydiv_core::PolyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("kernel has a pole at zeta = z")]
    Pole,
    #[error("singular point of the hypersurface: |da| = {0:e}")]
    SingularPoint(f64),
    #[error("the tuple f nearly vanishes on X: |f| = {0:e}")]
    CommonZero(f64),
    #[error("quadrature did not reach tolerance: value {value}, error estimate {error:e}")]
    NonConvergence { value: String, error: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

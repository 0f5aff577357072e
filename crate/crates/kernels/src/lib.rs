//! Numerical evaluation of weighted Cauchy-Fantappie type kernels on `P^N`
//! and on plane curves, and quadrature realizations of the associated
//! representation and division formulas.

pub mod checks;
pub mod cpoly;
pub mod error;
pub mod form;
pub mod hefer;
pub mod hypersurface;
pub mod koszul;
pub mod point;
pub mod quadrature;
pub mod represent;
pub mod scalar;
pub mod weights;

pub use error::KernelError;
pub use form::{FormValue, Layout, Weight};
pub use point::ChartPoint;
pub use quadrature::{QuadResult, QuadratureConfig};
pub use scalar::{Jet, C64};

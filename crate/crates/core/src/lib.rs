//! Exact polynomial algebra over the rationals: Gröbner bases, free
//! resolutions, degree bounds and certified division.

pub mod betti;
pub mod bounds;
pub mod division;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod resolution;
pub mod variety;

pub use error::{BoundError, DivisionError, PolyError, ResolutionError};
pub use groebner::{groebner_basis, GroebnerBasis};
pub use parse::parse_poly;
pub use poly::{rat, ratio, Degree, Monomial, MonomialOrder, Rat, RatPoly, Ring};

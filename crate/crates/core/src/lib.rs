//! Mahler measure of `P_d(x, y) = Σ_{0 ≤ i+j ≤ d} x^i y^j`.
//!
//! The closed form is a signed sum of Bloch–Wigner dilogarithms at roots of
//! unity ([`mahler_closed`]); [`mahler_oracle`] recomputes it from the
//! definition by Jensen's formula and quadrature, and [`limits`] studies the
//! approach to `9ζ(3)/(2π²)`.

pub mod error;
pub mod limits;
pub mod mahler_closed;
pub mod mahler_oracle;
pub mod polynomials;
pub mod quadrature;
pub mod specfun;
pub mod toric;
pub mod volume;

pub use error::{MahlerError, Result};
pub use mahler_closed::{MahlerEstimate, Method};
pub use polynomials::PdSpec;

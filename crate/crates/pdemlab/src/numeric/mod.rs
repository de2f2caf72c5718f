//! Internal numerical kernels: adaptive quadrature, an embedded Runge-Kutta
//! pair, symmetric tridiagonal eigenvalues and a complex tridiagonal solver.

pub mod ode;
pub mod quad;
pub mod roots;
pub mod tridiag;

pub use ode::{OdeOutcome, Rk45};
pub use quad::adaptive_quad;
pub use roots::brent;

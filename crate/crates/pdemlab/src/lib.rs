//! Numerical laboratory for position-dependent effective mass (PDEM) dynamics.
//!
//! The crate covers four connected pieces of machinery:
//!
//! * [`classical`] — the equivalence between PDEM Hamiltonian motion and
//!   constant-mass dynamics damped by a force proportional to the velocity
//!   squared, in both directions (forward reduction and Hamiltonianization of
//!   a given damping law), with trajectory integration and conserved-quantity
//!   tracking.
//! * [`quantum`] — quantization built on the Laplace–Beltrami operator of the
//!   mass metric: exact exponential-mass solutions (quasi-free states, box
//!   spectra, step scattering), the von Roos ordering comparison, a
//!   finite-difference eigensolver and norm-conserving Crank–Nicolson
//!   evolution.
//! * [`fermigas`] — classical and quantum statistical mechanics of an ideal
//!   Fermi gas of such particles, from the partition function through exact
//!   polylogarithm thermodynamics and Sommerfeld limits.
//! * [`morse`] — exactly solvable bound states of the Morse potential with
//!   exponentially increasing or decreasing mass.
//!
//! Shared data types live in [`model`]; the self-contained special functions
//! (Bessel J1/Y1, Hermite, Kummer, polylogarithms, Si/Cin) in [`specfun`].

pub mod classical;
pub mod error;
pub mod fermigas;
pub mod model;
pub mod morse;
pub(crate) mod numeric;
pub mod quantum;
pub mod specfun;

pub use error::PdemError;

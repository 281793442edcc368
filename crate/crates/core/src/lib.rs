//! Exact computations around strongly independent integer matrices and
//! Fourier diagnostics of `xA`-invariant measures on the n-torus.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: arbitrary-precision integer and rational matrices.
//! - [`algebraic`]: polynomials over Q, cyclotomic fields and the real
//!   subfields generated by `2cos(2pi/m)`.
//! - [`tridiagonal`]: the tridiagonal families `M_n(a)`, `N_n(a)`, their
//!   determinants, characteristic polynomials and spectra.
//! - [`independence`]: strong independence checks, box searches and the
//!   eigenvalue-degree certificate for powers of `M_n(2)`.
//! - [`measures`]: Folner sequences, densities, rational atomic measures,
//!   exact Fourier coefficients and support bounds.
//! - [`mixing`]: exact ergodic / weak / strong mixing diagnostics via
//!   eventual periodicity, orbit measures and the rigidity harness.
//! - [`cli`]: the command-line front end and report serialization.

pub mod algebraic;
pub mod cli;
mod error;
pub mod formats;
pub mod independence;
pub mod linalg;
pub mod literal;
pub mod measures;
pub mod mixing;
pub mod tridiagonal;

pub use error::{Error, Result};

//! Partial-wave scattering of a charged particle on the Dirac magnetic monopole.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Jacobi polynomials, Bessel functions, spherical and monopole
//!   harmonics, and finite-difference angular momentum operators.
//! * [`radial`]: composite Gauss–Legendre grids in `r` and `k`, radial and spectral
//!   states, and the order-`mu` Fourier–Bessel transform pair.
//! * [`dynamics`]: spectral propagators for the free and monopole radial
//!   Hamiltonians and the decay diagnostics built on them.
//! * [`scattering`]: the identification operator, Cook integrands, wave-operator
//!   approximants and channel phase shifts.
//! * [`perturbation`]: admissibility of added potentials and split-step evolution
//!   under `h_l + V`.

pub mod dynamics;
mod error;
pub mod io;
pub mod perturbation;
pub mod quadrature;
pub mod radial;
pub mod scattering;
pub mod specfun;

pub use error::{Error, Result};
pub use specfun::Channel;

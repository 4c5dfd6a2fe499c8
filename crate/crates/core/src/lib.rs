//! Discretizations of magnetic Smilansky-Solomyak operators and the numerical
//! checks of their spectral transition: 1D comparison operators, 2D sparse
//! Hamiltonians, a Lanczos eigensolver, fiber bands and quasimodes.

#![allow(non_snake_case)]

pub mod comparison;
pub mod eigensolver;
pub mod existence;
pub mod fiber;
pub mod hamiltonian;
pub mod error;
pub mod model;
pub mod quad;
pub mod quasimode;
pub mod sparse;

pub use error::{Error, Result};

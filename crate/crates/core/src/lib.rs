//! Finite-truncation toolkit for the perturbed magnetic Dirac operator in the
//! plane: Landau-level basis functions, Toeplitz and Dirac matrices in
//! arbitrary precision, eigenvalue asymptotics, logarithmic capacity and the
//! index of pairs of projections.

pub mod asymptotics;
pub mod capacity;
pub mod dirac;
pub mod error;
pub mod fock;
pub mod index;
pub mod num;
pub mod quad;
pub mod symbol;
pub mod toeplitz;

pub use error::{Error, Result};

//! Truncated Toeplitz matrices, the arbitrary-precision Hermitian
//! eigensolver and eigenvalue counting.

mod assembly;
mod jacobi;
mod matrix;
mod spectrum;

pub use assembly::{assemble_dirac_toeplitz, assemble_landau_toeplitz, epsilon_bracket};
pub use jacobi::{hermitian_eigen, hermitian_eigenvalues, hermitian_eigenvalues_capped, EigenPairs, DEFAULT_MAX_SWEEPS};
pub use matrix::HermitianMatrix;
pub use spectrum::{counting, counting_f64, Sign, Spectrum};

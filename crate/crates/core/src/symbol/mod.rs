//! Laguerre polynomials, effective symbols v_q(V) and the bump profile.

pub mod bump;
pub mod effective;
pub mod laguerre;

pub use bump::{appendix_bump, bump_eta, BumpCertificate, AUTO_DELTA_FRACTION, BUMP_GRID_TOL};
pub use effective::{cancelling_v2, effective_symbol, magnetic_amplitude, magnetic_amplitude_at, suppressing_v2, ScalarField};
pub use laguerre::{laguerre, LaguerrePoly};

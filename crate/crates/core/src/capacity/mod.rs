//! Logarithmic capacity, monic L² minima, the constants 𝔠_± and encirclement.

pub mod asym;
pub mod encircle;
pub mod fekete;
pub mod monic;
pub mod region;

pub use asym::{asym_constant, asym_constant_from_capacity, known_capacity, AsymConstant, AsymSource};
pub use encircle::{encircles, Cell, EncircleReport, Encirclement, Raster, MARGIN_CELLS};
pub use fekete::{
    capacity_estimate, chebyshev_bound, chebyshev_bound_with_roots, extrapolate, geometric_mean_distance,
    leja_points, transfinite_diameter, transfinite_sequence, CapacityEstimate, TransfiniteDiameter, OPTIMIZER_TOL,
};
pub use monic::{monic_l2_minimum, monic_l2_sequence, monomial_gram};
pub use region::{Curve, Region};

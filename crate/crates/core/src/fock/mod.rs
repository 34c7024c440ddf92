//! Angular momentum basis of the Landau levels, ladder operators and matrix
//! elements of multiplication operators.

mod element;
mod gamma;
mod jet;
mod ladder;
mod profile;
mod radial;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use element::{
    grid_matrix, matrix_element, radial_weights, Element, RadialWeights, GRID_QUAD_TOL, RADIAL_QUAD_TOL,
};
pub use gamma::{gaussian_moment, regularized_lower_gamma, step_average};
pub use jet::Jet;
pub use ladder::{build_basis_function, ladder_lower, ladder_raise, LadderEvaluator, LadderFunction};
pub use gamma::full_gaussian_moment;
pub use profile::{Annulus, Grid2D, PotentialSpec, Profile, RadialStep, WProfile};
pub use radial::{bump_h, bump_h_prime, AppendixProfile, RadialExpr, SmoothRadial, Term};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagneticParams {
    pub b: f64,
    pub m: f64,
}

impl MagneticParams {
    pub fn new(b: f64, m: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::invalid(format!("field amplitude b must be > 0, got {b}")));
        }
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::invalid(format!("mass m must be >= 0, got {m}")));
        }
        Ok(MagneticParams { b, m })
    }

    pub fn validate(&self) -> Result<()> {
        MagneticParams::new(self.b, self.m).map(|_| ())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    pub k: u32,
    pub n: u32,
}

impl BasisIndex {
    pub fn new(k: u32, n: u32) -> Self {
        BasisIndex { k, n }
    }

    pub fn angular_momentum(&self) -> i64 {
        self.k as i64 - self.n as i64
    }
}

/// Landau-Dirac level μ_q = sign(q)·√(2b|q| + m²), with μ_0 = m.
pub fn landau_dirac_level(q: i64, p: &MagneticParams, prec: u32) -> Float {
    let two_bq = Float::with_val(prec, 2.0 * p.b) * q.unsigned_abs();
    let m2 = Float::with_val(prec, p.m) * p.m;
    let mu = Float::with_val(prec, two_bq + m2).sqrt();
    if q < 0 {
        -mu
    } else {
        mu
    }
}

pub fn landau_dirac_level_f64(q: i64, p: &MagneticParams) -> f64 {
    let mu = (2.0 * p.b * q.unsigned_abs() as f64 + p.m * p.m).sqrt();
    if q < 0 {
        -mu
    } else {
        mu
    }
}

/// Weight t_q = (1 + m/|μ_q|)/2 of the upper component in the level-q projection; t_0 = 1.
pub fn t_coefficient(q: i64, p: &MagneticParams, prec: u32) -> Float {
    if q == 0 {
        return Float::with_val(prec, 1);
    }
    let mu = landau_dirac_level(q, p, prec).abs();
    let ratio = Float::with_val(prec, p.m) / mu;
    (ratio + 1u32) / 2u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_examples() {
        let p = MagneticParams::new(2.0, 1.0).unwrap();
        assert_eq!(landau_dirac_level(0, &p, 128), 1);
        let p = MagneticParams::new(2.0, 0.0).unwrap();
        assert_eq!(landau_dirac_level(1, &p, 128), 2);
        let p = MagneticParams::new(1.0, 0.0).unwrap();
        assert_eq!(landau_dirac_level(-2, &p, 128), -2);
    }

    #[test]
    fn t_coefficient_examples() {
        for b in [0.5, 1.0, 3.0] {
            let p = MagneticParams::new(b, 0.0).unwrap();
            assert_eq!(t_coefficient(1, &p, 128), 0.5);
        }
        let p = MagneticParams::new(1.5, 1.0).unwrap();
        assert_eq!(t_coefficient(0, &p, 128), 1);
        assert_eq!(t_coefficient(1, &p, 128), 0.75);
        assert_eq!(t_coefficient(-1, &p, 128), 0.75);
    }

    #[test]
    fn params_reject_bad_values() {
        assert!(MagneticParams::new(0.0, 0.0).is_err());
        assert!(MagneticParams::new(1.0, -1.0).is_err());
    }
}

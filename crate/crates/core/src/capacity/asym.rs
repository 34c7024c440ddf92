//! The constants 𝔠_± = 1 + ln(b/2 · Cap²) entering the three-term asymptotics.

use serde::Serialize;

use super::fekete::{capacity_estimate, CapacityEstimate};
use super::region::Region;
use crate::error::{Error, Result};
use crate::fock::Profile;
use crate::toeplitz::Sign;

/// Either a set directly or a potential whose support (side +) or
/// K_−-set (side −) is taken.
#[derive(Clone, Debug)]
pub enum AsymSource {
    Region(Region),
    Potential(Profile),
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymConstant {
    pub value: f64,
    pub capacity: f64,
    pub region: Region,
    pub estimate: Option<CapacityEstimate>,
}

pub fn asym_constant_from_capacity(cap: f64, b: f64) -> Result<f64> {
    if !(cap > 0.0 && cap.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(Error::invalid(format!("need Cap > 0 and b > 0, got Cap={cap}, b={b}")));
    }
    Ok(1.0 + (0.5 * b * cap * cap).ln())
}

/// Closed-form capacity for regions that have one.
pub fn known_capacity(e: &Region) -> Option<f64> {
    match e {
        Region::Disk { radius, .. } => Some(*radius),
        Region::Annulus { outer, .. } => Some(*outer),
        Region::Segment { a, b } => Some(0.25 * (a[0] - b[0]).hypot(a[1] - b[1])),
        _ => None,
    }
}

/// Support of a radial step as a region; None if it is empty.
fn step_region(p: &Profile) -> Result<Option<Region>> {
    let Profile::Step(s) = p else {
        return Err(Error::unsupported("support extraction needs a radial step potential"));
    };
    let parts: Vec<Region> = s
        .annuli()
        .iter()
        .filter(|a| a.value != 0.0)
        .map(|a| Region::Annulus { center: [0.0, 0.0], inner: a.r_lo, outer: a.r_hi })
        .collect();
    Ok(match parts.len() {
        0 => None,
        1 => parts.into_iter().next(),
        _ => Some(Region::Union { parts }),
    })
}

/// 𝔠_± for a set or a potential. Side − on a potential requires the
/// sandwich C χ_K ≥ v ≥ c χ_K with c > 0, where K_−(v) = supp v.
pub fn asym_constant(source: &AsymSource, b: f64, side: Sign, n_max: usize) -> Result<AsymConstant> {
    let region = match source {
        AsymSource::Region(r) => r.clone(),
        AsymSource::Potential(p) => {
            if side == Sign::Minus {
                let Profile::Step(s) = p else {
                    return Err(Error::unsupported("K_−(v) is only available for sandwiched step potentials"));
                };
                if s.annuli().iter().any(|a| a.value < 0.0) {
                    return Err(Error::unsupported("K_−(v) needs a nonnegative potential"));
                }
            }
            step_region(p)?.ok_or_else(|| Error::invalid("potential has empty support"))?
        }
    };
    region.validate()?;
    let (capacity, estimate) = match known_capacity(&region) {
        Some(c) => (c, None),
        None => {
            let est = capacity_estimate(&region, n_max)?;
            (est.extrapolated, Some(est))
        }
    };
    Ok(AsymConstant { value: asym_constant_from_capacity(capacity, b)?, capacity, region, estimate })
}

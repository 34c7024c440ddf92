//! Spinor basis and truncation parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{landau_dirac_level_f64, BasisIndex, MagneticParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Upper,
    Lower,
}

/// A basis spinor: φ_{k,n} in the upper or lower slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpinorIndex {
    pub component: Component,
    pub index: BasisIndex,
}

impl SpinorIndex {
    /// Index conserved by D_0 and by radial diagonal V: k − n for the upper
    /// slot, k − n − 1 for the lower slot.
    pub fn total_angular(&self) -> i64 {
        let l = self.index.angular_momentum();
        match self.component {
            Component::Upper => l,
            Component::Lower => l - 1,
        }
    }
}

/// Upper slots carry levels n ≤ N, lower slots n ≤ N − 1, all with k ≤ K.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub k_max: u32,
    pub n_max: u32,
    /// Half-width of the window around each level; defaults to a quarter gap.
    #[serde(default)]
    pub delta: Option<f64>,
}

impl TruncationSpec {
    pub fn new(k_max: u32, n_max: u32) -> Self {
        TruncationSpec { k_max, n_max, delta: None }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_k(&self, k_max: u32) -> Self {
        TruncationSpec { k_max, ..self.clone() }
    }

    pub fn validate(&self, p: &MagneticParams) -> Result<()> {
        p.validate()?;
        if self.k_max < 1 || self.n_max < 1 {
            return Err(Error::invalid("truncation needs K ≥ 1 and N ≥ 1"));
        }
        if let Some(d) = self.delta {
            let gap = min_gap(p, self.n_max);
            if !(d > 0.0 && d < gap) {
                return Err(Error::invalid(format!("window δ = {d} must lie in (0, {gap}), the minimal level gap")));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> Vec<SpinorIndex> {
        let mut out = Vec::new();
        for n in 0..=self.n_max {
            for k in 0..=self.k_max {
                out.push(SpinorIndex { component: Component::Upper, index: BasisIndex::new(k, n) });
            }
        }
        for n in 0..self.n_max {
            for k in 0..=self.k_max {
                out.push(SpinorIndex { component: Component::Lower, index: BasisIndex::new(k, n) });
            }
        }
        out
    }

    /// Window half-width at level q: the explicit δ or a quarter of the local gap.
    pub fn window(&self, q: i64, p: &MagneticParams) -> f64 {
        self.delta.unwrap_or_else(|| 0.25 * local_gap(q, p))
    }

    /// Number of truncated free eigenvalues equal to μ_q.
    pub fn level_multiplicity(&self, q: i64) -> usize {
        if q.unsigned_abs() as u32 > self.n_max {
            0
        } else {
            self.k_max as usize + 1
        }
    }
}

/// min(μ_{q+1} − μ_q, μ_q − μ_{q−1}).
pub fn local_gap(q: i64, p: &MagneticParams) -> f64 {
    let mu = |j| landau_dirac_level_f64(j, p);
    (mu(q + 1) - mu(q)).min(mu(q) - mu(q - 1))
}

/// Smallest gap between consecutive levels with |q| ≤ N.
pub fn min_gap(p: &MagneticParams, n_max: u32) -> f64 {
    let n = n_max as i64;
    (-n..n).map(|q| landau_dirac_level_f64(q + 1, p) - landau_dirac_level_f64(q, p)).fold(f64::INFINITY, f64::min)
}

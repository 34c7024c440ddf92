use rug::Float;

use crate::error::{Error, Result};
use crate::num::pow2;

/// Sorted eigenvalue list of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Descending.
    pub values: Vec<Float>,
    pub precision_bits: u32,
    pub provenance: String,
    /// Eigenvalues with |λ| ≤ cutoff count as numerically zero.
    pub cutoff: Float,
    pub relative_off_norm: f64,
}

impl Spectrum {
    pub fn new(mut values: Vec<Float>, precision_bits: u32, provenance: String, relative_off_norm: f64) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        let scale = values
            .iter()
            .map(|v| v.clone().abs())
            .fold(Float::with_val(precision_bits, 1), |m, v| if v > m { v } else { m });
        let cutoff = scale * pow2(precision_bits, -(precision_bits as i32) / 2);
        let provenance = format!("{provenance}; zero cutoff {}", cutoff.to_f64());
        Spectrum { values, precision_bits, provenance, cutoff, relative_off_norm }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ν_k^+: positive eigenvalues above the cutoff, non-increasing.
    pub fn positive(&self) -> Vec<Float> {
        self.values.iter().filter(|v| **v > self.cutoff).cloned().collect()
    }

    /// ν_k^−: negative eigenvalues below −cutoff, non-decreasing.
    pub fn negative(&self) -> Vec<Float> {
        let neg = Float::with_val(self.precision_bits, -&self.cutoff);
        self.values.iter().rev().filter(|v| **v < neg).cloned().collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// n_±(s; T): eigenvalues > s (Plus) or < −s (Minus), with multiplicity.
pub fn counting(s: &Float, spec: &Spectrum, sign: Sign) -> Result<usize> {
    if *s <= 0 {
        return Err(Error::invalid("counting threshold must be positive"));
    }
    Ok(match sign {
        Sign::Plus => spec.values.iter().filter(|v| *v > s).count(),
        Sign::Minus => spec.values.iter().filter(|v| Float::with_val(v.prec(), -*v) > *s).count(),
    })
}

pub fn counting_f64(s: f64, spec: &Spectrum, sign: Sign) -> Result<usize> {
    counting(&Float::with_val(spec.precision_bits, s), spec, sign)
}

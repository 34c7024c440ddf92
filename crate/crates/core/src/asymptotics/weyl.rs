//! The normalized sequence s_k = (k! ν_k)^{1/k} and its limit estimates.

use nalgebra::{DMatrix, DVector};
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::factorial;
use crate::toeplitz::{Sign, Spectrum};

/// Minimum number of points for `limit_fit`.
pub const MIN_FIT_POINTS: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct WeylSequence {
    pub k_lo: u32,
    pub k_hi: u32,
    /// ln(k! ν_k) for k = k_lo..=k_hi.
    pub ln_scaled: Vec<f64>,
    /// s_k = (k! ν_k)^{1/k}.
    pub s: Vec<f64>,
    pub sign: Sign,
}

impl WeylSequence {
    pub fn ks(&self) -> impl Iterator<Item = u32> {
        self.k_lo..=self.k_hi
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitFit {
    /// ln(k! ν_k) ≈ α + β k + γ ln k over the sequence range.
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Root mean square residual of the fit.
    pub residual: f64,
    /// e^β.
    pub slope_limit: f64,
    /// min and max over the window of ŝ_k = exp((ln(k! ν_k) − α − γ ln k)/k).
    pub liminf_est: f64,
    pub limsup_est: f64,
}

/// s_k from |ν_k| (k counted from 0, largest first), k ∈ [k_lo, k_hi], k_lo ≥ 1.
pub fn weyl_sequence_from_values(nu: &[Float], k_lo: u32, k_hi: u32, sign: Sign) -> Result<WeylSequence> {
    if k_lo < 1 || k_hi < k_lo {
        return Err(Error::invalid(format!("need 1 ≤ k_lo ≤ k_hi, got [{k_lo}, {k_hi}]")));
    }
    if nu.len() <= k_hi as usize {
        return Err(Error::InsufficientData { needed: k_hi as usize + 1, usable: nu.len() });
    }
    let mut ln_scaled = Vec::new();
    let mut s = Vec::new();
    for k in k_lo..=k_hi {
        let v = Float::with_val(nu[k as usize].prec(), nu[k as usize].abs_ref());
        if v <= 0 {
            return Err(Error::InsufficientData { needed: k_hi as usize + 1, usable: k as usize });
        }
        let prec = v.prec();
        let l = Float::with_val(prec, factorial(prec, k) * v).ln();
        let lf = l.to_f64();
        ln_scaled.push(lf);
        s.push(Float::with_val(prec, l / k).exp().to_f64());
    }
    Ok(WeylSequence { k_lo, k_hi, ln_scaled, s, sign })
}

/// s_k from the eigenvalues beyond the spectrum's zero cutoff on the given side.
pub fn weyl_sequence(spec: &Spectrum, k_lo: u32, k_hi: u32, sign: Sign) -> Result<WeylSequence> {
    let nu = match sign {
        Sign::Plus => spec.positive(),
        Sign::Minus => spec.negative(),
    };
    weyl_sequence_from_values(&nu, k_lo, k_hi, sign)
}

pub fn limit_fit(ws: &WeylSequence) -> Result<LimitFit> {
    let m = ws.s.len();
    if m < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, usable: m });
    }
    let ks: Vec<f64> = ws.ks().map(f64::from).collect();
    let x = DMatrix::from_fn(m, 3, |i, j| match j {
        0 => 1.0,
        1 => ks[i],
        _ => ks[i].ln(),
    });
    let y = DVector::from_column_slice(&ws.ln_scaled);
    let c = x.clone().svd(true, true).solve(&y, 1e-14).map_err(|e| Error::NumericalRank(e.to_string()))?;
    let res = &y - &x * &c;
    let residual = (res.norm_squared() / m as f64).sqrt();
    let (alpha, beta, gamma) = (c[0], c[1], c[2]);
    let hat: Vec<f64> =
        ks.iter().zip(&ws.ln_scaled).map(|(&k, &l)| ((l - alpha - gamma * k.ln()) / k).exp()).collect();
    Ok(LimitFit {
        alpha,
        beta,
        gamma,
        residual,
        slope_limit: beta.exp(),
        liminf_est: hat.iter().cloned().fold(f64::INFINITY, f64::min),
        limsup_est: hat.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    })
}

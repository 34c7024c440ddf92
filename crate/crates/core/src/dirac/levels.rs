//! Eigenvalues of the truncated D_0 + V in windows around Landau-Dirac levels.

use rug::Float;
use serde::Serialize;

use super::assemble::{assemble_perturbed_dirac, DiracMatrix};
use super::truncation::{local_gap, TruncationSpec};
use crate::error::{Error, Result};
use crate::fock::{landau_dirac_level, MagneticParams, PotentialSpec};
use crate::num::{pow2, to_decimal};
use crate::toeplitz::{hermitian_eigenvalues, Spectrum};

/// Eigenvalues within this multiple of the eigensolver tolerance of μ_q form the unperturbed cluster.
pub const CLUSTER_FACTOR: f64 = 10.0;
/// Offset of the second truncation used to flag spectral pollution.
pub const POLLUTION_OFFSET: u32 = 10;

/// Absolute eigenvalue accuracy of the Jacobi solver: 2^{8−prec}·‖H‖_F.
pub fn eigen_tolerance(h: &DiracMatrix, prec: u32) -> Float {
    Float::with_val(prec, h.matrix.frobenius_norm() * pow2(prec, 8 - prec as i32))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelWindow {
    pub q: i64,
    #[serde(serialize_with = "ser_float")]
    pub level: Float,
    pub delta: f64,
    #[serde(serialize_with = "ser_float")]
    pub margin: Float,
    /// e − μ_q for eigenvalues in (μ_q + margin, μ_q + δ), ascending.
    #[serde(serialize_with = "ser_floats")]
    pub above: Vec<Float>,
    /// μ_q − e for eigenvalues in (μ_q − δ, μ_q − margin), ascending.
    #[serde(serialize_with = "ser_floats")]
    pub below: Vec<Float>,
    /// Eigenvalues within the margin of μ_q.
    pub cluster: usize,
    /// Multiplicity of μ_q for V = 0 at the same truncation.
    pub free_cluster: usize,
}

fn ser_float<S: serde::Serializer>(x: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_decimal(x))
}

fn ser_floats<S: serde::Serializer>(x: &[Float], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(to_decimal))
}

impl LevelWindow {
    /// (𝒩_+^q(λ), 𝒩_−^q(λ)) restricted to the window.
    pub fn counts(&self, lambda: &Float) -> (usize, usize) {
        (self.above.iter().filter(|d| *d > lambda).count(), self.below.iter().filter(|d| *d > lambda).count())
    }

    /// Eigenvalues in the window outside the cluster.
    pub fn outside_cluster(&self) -> usize {
        self.above.len() + self.below.len()
    }
}

fn check_window(q: i64, delta: f64, p: &MagneticParams, t: &TruncationSpec) -> Result<()> {
    if q.unsigned_abs() as u32 > t.n_max {
        return Err(Error::invalid(format!("level {q} is beyond the truncation N = {}", t.n_max)));
    }
    let gap = local_gap(q, p);
    if !(delta > 0.0 && delta < 0.5 * gap) {
        return Err(Error::invalid(format!("window δ = {delta} overlaps an adjacent level (half gap {})", 0.5 * gap)));
    }
    Ok(())
}

/// Sorts a spectrum into the window around μ_q.
pub fn level_window(spec: &Spectrum, q: i64, delta: f64, margin: &Float, p: &MagneticParams, t: &TruncationSpec) -> Result<LevelWindow> {
    check_window(q, delta, p, t)?;
    let prec = spec.precision_bits;
    let level = landau_dirac_level(q, p, prec);
    let d = Float::with_val(prec, delta);
    let (mut above, mut below, mut cluster) = (Vec::new(), Vec::new(), 0);
    for e in &spec.values {
        let off = Float::with_val(prec, e - &level);
        let mag = Float::with_val(prec, off.abs_ref());
        if mag <= *margin {
            cluster += 1;
        } else if mag < d {
            if off.is_sign_positive() {
                above.push(mag);
            } else {
                below.push(mag);
            }
        }
    }
    above.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    below.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(LevelWindow {
        q,
        level,
        delta,
        margin: margin.clone(),
        above,
        below,
        cluster,
        free_cluster: t.level_multiplicity(q),
    })
}

/// Diagonalizes h and returns the window around μ_q.
pub fn eigen_near_level(h: &DiracMatrix, q: i64, delta: f64, p: &MagneticParams, prec: u32) -> Result<LevelWindow> {
    check_window(q, delta, p, &h.truncation)?;
    let spec = hermitian_eigenvalues(&h.matrix, prec)?;
    let margin = Float::with_val(prec, eigen_tolerance(h, prec) * CLUSTER_FACTOR);
    level_window(&spec, q, delta, &margin, p, &h.truncation)
}

#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub abs_ln_lambda: f64,
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_plus_alt: usize,
    pub n_minus_alt: usize,
    /// Both counts agree between the two truncations.
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCountReport {
    pub q: i64,
    pub k_max: u32,
    pub k_alt: u32,
    pub window: LevelWindow,
    pub window_alt: LevelWindow,
    pub rows: Vec<CountRow>,
}

/// 𝒩_±^q(λ) at truncations K and K + 10 for each λ.
pub fn level_counts(
    v: &PotentialSpec,
    q: i64,
    lambdas: &[Float],
    t: &TruncationSpec,
    p: &MagneticParams,
    prec: u32,
) -> Result<LevelCountReport> {
    let delta = t.window(q, p);
    let t_alt = t.with_k(t.k_max + POLLUTION_OFFSET);
    let h = assemble_perturbed_dirac(p, v, t, prec)?;
    let h_alt = assemble_perturbed_dirac(p, v, &t_alt, prec)?;
    let window = eigen_near_level(&h, q, delta, p, prec)?;
    let window_alt = eigen_near_level(&h_alt, q, delta, p, prec)?;
    let rows = lambdas
        .iter()
        .map(|lam| {
            let (a, b) = window.counts(lam);
            let (c, d) = window_alt.counts(lam);
            CountRow {
                abs_ln_lambda: -Float::with_val(prec, lam.ln_ref()).to_f64(),
                n_plus: a,
                n_minus: b,
                n_plus_alt: c,
                n_minus_alt: d,
                stable: a == c && b == d,
            }
        })
        .collect();
    Ok(LevelCountReport { q, k_max: t.k_max, k_alt: t_alt.k_max, window, window_alt, rows })
}

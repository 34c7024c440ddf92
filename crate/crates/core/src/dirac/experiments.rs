//! Finite-truncation checks of the Toeplitz sandwich for 𝒩_±^q and of the
//! suppression/cancellation phenomenon at the first two levels.

use rug::Float;
use serde::Serialize;

use super::assemble::assemble_perturbed_dirac;
use super::levels::{eigen_near_level, LevelWindow, POLLUTION_OFFSET};
use super::truncation::TruncationSpec;
use crate::error::{Error, Result};
use crate::fock::{MagneticParams, PotentialSpec, Profile, SmoothRadial};
use crate::symbol::{cancelling_v2, suppressing_v2};
use crate::toeplitz::{assemble_dirac_toeplitz, counting, epsilon_bracket, hermitian_eigenvalues, Sign, Spectrum};

#[derive(Clone, Debug, Serialize)]
pub struct SandwichCounts {
    pub k_max: u32,
    /// n_+(λ; T_q(V_ε^−)), 𝒩_+^q(λ), n_+(λ; T_q(V_ε^+)).
    pub plus: [usize; 3],
    /// n_−(λ; T_q(V_ε^+)), 𝒩_−^q(λ), n_−(λ; T_q(V_ε^−)).
    pub minus: [usize; 3],
    /// 𝒩 − lower and upper − 𝒩 for each side: [plus_lo, plus_hi, minus_lo, minus_hi].
    pub defects: [i64; 4],
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagSandwichRow {
    pub abs_ln_lambda: f64,
    pub at_k: SandwichCounts,
    pub at_alt: SandwichCounts,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagSandwichReport {
    pub q: i64,
    pub eps: f64,
    pub delta: f64,
    pub rows: Vec<DiagSandwichRow>,
    /// max |d| over the grid at truncation K.
    pub max_abs_defect: i64,
    /// Every defect moves by at most 1 between K and K + 10.
    pub stable: bool,
}

struct Level {
    k_max: u32,
    window: LevelWindow,
    t_minus: Spectrum,
    t_plus: Spectrum,
}

fn level_data(v: &PotentialSpec, q: i64, eps: f64, t: &TruncationSpec, p: &MagneticParams, prec: u32) -> Result<Level> {
    let (vm, vp) = epsilon_bracket(v, eps)?;
    let delta = t.window(q, p);
    let h = assemble_perturbed_dirac(p, v, t, prec)?;
    let window = eigen_near_level(&h, q, delta, p, prec)?;
    let t_minus = hermitian_eigenvalues(&assemble_dirac_toeplitz(q, &vm, t.k_max, p, prec)?, prec)?;
    let t_plus = hermitian_eigenvalues(&assemble_dirac_toeplitz(q, &vp, t.k_max, p, prec)?, prec)?;
    Ok(Level { k_max: t.k_max, window, t_minus, t_plus })
}

fn counts_at(l: &Level, lam: &Float) -> Result<SandwichCounts> {
    let (np, nm) = l.window.counts(lam);
    let plus = [counting(lam, &l.t_minus, Sign::Plus)?, np, counting(lam, &l.t_plus, Sign::Plus)?];
    let minus = [counting(lam, &l.t_plus, Sign::Minus)?, nm, counting(lam, &l.t_minus, Sign::Minus)?];
    let d = |a: usize, b: usize| a as i64 - b as i64;
    Ok(SandwichCounts {
        k_max: l.k_max,
        plus,
        minus,
        defects: [d(plus[1], plus[0]), d(plus[2], plus[1]), d(minus[1], minus[0]), d(minus[2], minus[1])],
    })
}

/// For each λ compares 𝒩_±^q(λ) of the truncated D_0 + V with the Toeplitz
/// counts of T_q(V ∓ ε|V|), at truncations K and K + 10. On the minus side
/// the more negative potential V − ε|V| gives the upper count.
pub fn verify_diag_sandwich(
    v: &PotentialSpec,
    q: i64,
    eps: f64,
    lambdas: &[Float],
    t: &TruncationSpec,
    p: &MagneticParams,
    prec: u32,
) -> Result<DiagSandwichReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let base = level_data(v, q, eps, t, p, prec)?;
    let alt = level_data(v, q, eps, &t.with_k(t.k_max + POLLUTION_OFFSET), p, prec)?;
    let mut rows = Vec::with_capacity(lambdas.len());
    for lam in lambdas {
        rows.push(DiagSandwichRow {
            abs_ln_lambda: -Float::with_val(prec, lam.ln_ref()).to_f64(),
            at_k: counts_at(&base, lam)?,
            at_alt: counts_at(&alt, lam)?,
        });
    }
    let max_abs_defect = rows.iter().flat_map(|r| r.at_k.defects).map(i64::abs).max().unwrap_or(0);
    let stable = rows.iter().all(|r| r.at_k.defects.iter().zip(r.at_alt.defects).all(|(a, b)| (a - b).abs() <= 1));
    Ok(DiagSandwichReport { q, eps, delta: t.window(q, p), rows, max_abs_defect, stable })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "branch")]
pub enum PropInfBranch {
    /// V₂ = −2t₁/(1−t₁)·|V₁ + ΔV₁/(2b)|.
    Suppressing,
    /// V₂ = −t₁/(1−t₁)·(1+ε)/(1−ε)·(V₁ + ΔV₁/(2b)).
    Cancelling { eps: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct PropInfRow {
    pub k_max: u32,
    /// Eigenvalues in (μ_0, μ_0 + δ) outside the cluster.
    pub mu0_above: usize,
    /// Eigenvalues in (μ_1, μ_1 + δ) outside the cluster.
    pub mu1_above: usize,
    /// Eigenvalues in (μ_1 − δ, μ_1) outside the cluster.
    pub mu1_below: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropInfReport {
    pub branch: PropInfBranch,
    pub delta: f64,
    pub n_max: u32,
    pub rows: Vec<PropInfRow>,
    pub mu0_strictly_increasing: bool,
    pub mu1_above_always_zero: bool,
    /// (μ_1 − δ, μ_1 + δ) counts vary by at most 1 across K.
    pub mu1_window_stable: bool,
}

/// Builds V₂ from V₁ for the chosen branch and counts eigenvalues of the
/// truncated D_0 + V near μ_0 and μ_1 for each K.
pub fn prop_inf_experiment(
    v1: &SmoothRadial,
    branch: PropInfBranch,
    delta: f64,
    ks: &[u32],
    n_max: u32,
    p: &MagneticParams,
    prec: u32,
) -> Result<PropInfReport> {
    if ks.is_empty() {
        return Err(Error::invalid("need at least one truncation K"));
    }
    let v2 = match branch {
        PropInfBranch::Suppressing => suppressing_v2(v1, p)?,
        PropInfBranch::Cancelling { eps } => cancelling_v2(v1, eps, p)?,
    };
    let v = PotentialSpec::diagonal(Profile::Smooth(v1.clone()), v2);
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let t = TruncationSpec::new(k, n_max.max(2)).with_delta(delta);
        let h = assemble_perturbed_dirac(p, &v, &t, prec)?;
        let w0 = eigen_near_level(&h, 0, delta, p, prec)?;
        let w1 = eigen_near_level(&h, 1, delta, p, prec)?;
        rows.push(PropInfRow { k_max: k, mu0_above: w0.above.len(), mu1_above: w1.above.len(), mu1_below: w1.below.len() });
    }
    let near1: Vec<usize> = rows.iter().map(|r| r.mu1_above + r.mu1_below).collect();
    Ok(PropInfReport {
        branch,
        delta,
        n_max: n_max.max(2),
        mu0_strictly_increasing: rows.windows(2).all(|w| w[1].mu0_above > w[0].mu0_above),
        mu1_above_always_zero: rows.iter().all(|r| r.mu1_above == 0),
        mu1_window_stable: near1.iter().max().unwrap() - near1.iter().min().unwrap() <= 1,
        rows,
    })
}

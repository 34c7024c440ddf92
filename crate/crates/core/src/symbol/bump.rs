//! Compactly supported radial bump G ≥ 0 with G + ΔG ≥ 0.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{bump_h, bump_h_prime, AppendixProfile, SmoothRadial};

/// Grid tolerance for min(G + ΔG).
pub const BUMP_GRID_TOL: f64 = 1e-8;
/// Fraction of the admissible scaling used when none is supplied.
pub const AUTO_DELTA_FRACTION: f64 = 0.9;
const SUP_SAMPLES: usize = 200_000;

#[derive(Clone, Debug, Serialize)]
pub struct BumpCertificate {
    pub delta: f64,
    /// Zero of the bracket in ΔF on (1, 2); ΔF > 0 beyond it.
    pub eta: f64,
    pub g_eta: f64,
    pub sup_g_second: f64,
    pub sup_g_prime_over_r: f64,
    /// δ²‖g″‖∞ and δ‖g′/r‖∞, each to be compared with g(η)/2.
    pub second_derivative_term: f64,
    pub first_derivative_term: f64,
    pub grid: usize,
    pub half_width: f64,
    pub min_g: f64,
    /// Stencil Laplacian with Richardson extrapolation.
    pub min_g_plus_laplacian: f64,
    /// Same minimum with the closed-form radial Laplacian.
    pub min_g_plus_laplacian_exact: f64,
    pub max_stencil_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Bracket of ΔF/h at s: 2(s−1)/(s²(s−2)²) − 1/s.
fn bracket(s: f64) -> f64 {
    let d = s * (s - 2.0);
    2.0 * (s - 1.0) / (d * d) - 1.0 / s
}

/// Root of the bracket in (1, 2) by bisection.
pub fn bump_eta() -> f64 {
    let (mut lo, mut hi) = (1.0_f64, 2.0 - 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bracket(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Sampled supremum on (0, 2) refined by golden section around the best sample.
fn sup_on_unit(f: impl Fn(f64) -> f64) -> f64 {
    let step = 2.0 / SUP_SAMPLES as f64;
    let (mut best_i, mut best) = (1, f(step));
    for i in 1..SUP_SAMPLES {
        let v = f(i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = ((best_i as f64 - 1.0) * step, (best_i as f64 + 1.0) * step);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.max(f(0.5 * (a + b)))
}

/// G(x) = g(δ|x|) together with its certificate. Without δ the scaling is
/// `AUTO_DELTA_FRACTION` times the smaller admissible bound.
pub fn appendix_bump(delta: Option<f64>, grid: usize) -> Result<(SmoothRadial, BumpCertificate)> {
    if grid < 16 {
        return Err(Error::invalid(format!("grid resolution must be at least 16, got {grid}")));
    }
    let eta = bump_eta();
    let base = AppendixProfile::new(1.0)?;
    let g_eta = base.g(eta);
    let sup2 = sup_on_unit(|s| bump_h_prime(s).abs());
    let sup1 = sup_on_unit(|s| if s > 0.0 { bump_h(s) / s } else { 0.0 });
    let half = 0.5 * g_eta;
    let delta = match delta {
        Some(d) => d,
        None => AUTO_DELTA_FRACTION * (half / sup2).sqrt().min(half / sup1),
    };
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::invalid(format!("bump scaling must be > 0, got {delta}")));
    }
    let t2 = delta * delta * sup2;
    let t1 = delta * sup1;
    if t2 >= half {
        return Err(Error::hypothesis(format!(
            "δ²‖g″‖∞ = {t2:e} is not below g(η)/2 = {half:e}"
        )));
    }
    if t1 >= half {
        return Err(Error::hypothesis(format!(
            "δ‖g′/r‖∞ = {t1:e} is not below g(η)/2 = {half:e}"
        )));
    }
    let profile = Arc::new(AppendixProfile::new(delta)?);
    let g = SmoothRadial::appendix(profile.clone(), 1.0)?;

    let width = 2.0 / delta;
    let h = 2.0 * width / (grid - 1) as f64;
    let radius = |i: usize, j: usize| {
        let x = -width + i as f64 * h;
        let y = -width + j as f64 * h;
        x.hypot(y)
    };
    // 2-node zero padding so both stencils are defined everywhere
    let pad = 2;
    let n = grid + 2 * pad;
    let vals: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % n, idx / n);
            if i < pad || j < pad || i >= grid + pad || j >= grid + pad {
                0.0
            } else {
                profile.g(delta * radius(i - pad, j - pad))
            }
        })
        .collect();
    let at = |i: usize, j: usize| vals[j * n + i];
    let rows: Vec<(f64, f64, f64, f64)> = (0..grid)
        .into_par_iter()
        .map(|j| {
            let mut acc = (f64::INFINITY, f64::INFINITY, f64::INFINITY, 0.0_f64);
            for i in 0..grid {
                let (ci, cj) = (i + pad, j + pad);
                let c = at(ci, cj);
                let d1 = (at(ci + 1, cj) + at(ci - 1, cj) + at(ci, cj + 1) + at(ci, cj - 1) - 4.0 * c) / (h * h);
                let d2 = (at(ci + 2, cj) + at(ci - 2, cj) + at(ci, cj + 2) + at(ci, cj - 2) - 4.0 * c)
                    / (4.0 * h * h);
                let lap = (4.0 * d1 - d2) / 3.0;
                let s = delta * radius(i, j);
                let exact = if s > 0.0 && s < 2.0 {
                    delta * delta * (profile.g_second(s) + profile.g_prime(s) / s)
                } else {
                    0.0
                };
                acc.0 = acc.0.min(c);
                acc.1 = acc.1.min(c + lap);
                acc.2 = acc.2.min(c + exact);
                acc.3 = acc.3.max((lap - exact).abs());
            }
            acc
        })
        .collect();
    let fold = rows.iter().fold((f64::INFINITY, f64::INFINITY, f64::INFINITY, 0.0_f64), |a, r| {
        (a.0.min(r.0), a.1.min(r.1), a.2.min(r.2), a.3.max(r.3))
    });
    let passed = fold.0 >= 0.0 && fold.1 >= -BUMP_GRID_TOL;
    let cert = BumpCertificate {
        delta,
        eta,
        g_eta,
        sup_g_second: sup2,
        sup_g_prime_over_r: sup1,
        second_derivative_term: t2,
        first_derivative_term: t1,
        grid,
        half_width: width,
        min_g: fold.0,
        min_g_plus_laplacian: fold.1,
        min_g_plus_laplacian_exact: fold.2,
        max_stencil_error: fold.3,
        tolerance: BUMP_GRID_TOL,
        passed,
    };
    Ok((g, cert))
}

//! Truncated Toeplitz matrices p_n v p_n and the level-q compressions T_q(V).

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::fock::{
    build_basis_function, grid_matrix, landau_dirac_level, radial_weights, t_coefficient, BasisIndex,
    LadderFunction, MagneticParams, PotentialSpec, Profile, SmoothRadial, WProfile, GRID_QUAD_TOL,
};
use crate::num::BigComplex;

use super::matrix::HermitianMatrix;

pub(crate) fn level_basis(n: u32, k_max: u32, p: &MagneticParams, prec: u32) -> Result<Vec<LadderFunction>> {
    (0..=k_max).into_par_iter().map(|k| build_basis_function(BasisIndex::new(k, n), p, prec)).collect()
}

/// Gram-type matrix ⟨f_j, v g_k⟩ for equally long families f, g.
fn profile_matrix(v: &Profile, fs: &[LadderFunction], gs: &[LadderFunction], b: f64, prec: u32) -> Result<Vec<Vec<(BigComplex, f64)>>> {
    match v {
        Profile::Grid(g) => {
            let (m, err) = grid_matrix(g, fs, gs, GRID_QUAD_TOL)?;
            Ok(m.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|z| (BigComplex::new(Float::with_val(prec, z.re), Float::with_val(prec, z.im)), err))
                        .collect()
                })
                .collect())
        }
        _ => {
            if v.is_zero() {
                return Ok(vec![vec![(BigComplex::zero(prec), 0.0); gs.len()]; fs.len()]);
            }
            let a_max = fs.iter().zip(gs).map(|(f, g)| f.max_moment_with(g).max(g.max_moment_with(f))).max().unwrap_or(0);
            let w = radial_weights(v, b, a_max, prec)?;
            Ok(fs
                .iter()
                .map(|f| {
                    gs.iter()
                        .map(|g| {
                            if angular(f) != angular(g) {
                                (BigComplex::zero(prec), 0.0)
                            } else {
                                let e = w.pair(f, g, 0);
                                (e.value, e.error)
                            }
                        })
                        .collect()
                })
                .collect())
        }
    }
}

fn angular(f: &LadderFunction) -> i64 {
    f.index.map(|i| i.angular_momentum()).expect("basis functions carry their index")
}

/// (K+1)×(K+1) matrix of ⟨φ_{j,n}, v φ_{k,n}⟩, j, k ≤ K. For radial v the
/// off-diagonal entries are exact zeros.
pub fn assemble_landau_toeplitz(n: u32, v: &Profile, k_max: u32, p: &MagneticParams, prec: u32) -> Result<HermitianMatrix> {
    if k_max < 1 {
        return Err(Error::invalid("truncation K must be at least 1"));
    }
    let basis = level_basis(n, k_max, p, prec)?;
    let dim = basis.len();
    let mut h = HermitianMatrix::zeros(dim, prec)
        .with_provenance(format!("p_{n} v p_{n}, K={k_max}, b={}, {prec} bits", p.b));
    if v.is_radial() {
        if !v.is_zero() {
            let w = radial_weights(v, p.b, n + k_max, prec)?;
            let diag: Vec<_> = basis.par_iter().map(|f| w.pair(f, f, 0)).collect();
            for (k, e) in diag.into_iter().enumerate() {
                h.assembly_error = h.assembly_error.max(e.error);
                h.set(k, k, e.value);
            }
        }
    } else {
        let m = profile_matrix(v, &basis, &basis, p.b, prec)?;
        for j in 0..dim {
            for k in j..dim {
                let avg = if j == k {
                    m[j][k].0.clone()
                } else {
                    (&m[j][k].0 + &m[k][j].0.conj()).scale_f64(0.5)
                };
                h.assembly_error = h.assembly_error.max(m[j][k].1);
                h.set(j, k, avg);
            }
        }
    }
    Ok(h)
}

/// Radial-moment table for the gauge field W = −i h(r) z, paired so that
/// ⟨f, W g⟩ = −i Σ conj(c) c′ w(j + i′ + 1).
fn w_matrix(h: &SmoothRadial, fs: &[LadderFunction], gs: &[LadderFunction], b: f64, prec: u32) -> Result<Vec<Vec<(BigComplex, f64)>>> {
    let a_max = fs.iter().flat_map(|f| gs.iter().map(move |g| f.max_moment_with(g) + 1)).max().unwrap_or(1);
    let w = radial_weights(&Profile::Smooth(h.clone()), b, a_max, prec)?;
    Ok(fs
        .iter()
        .map(|f| {
            gs.iter()
                .map(|g| {
                    if angular(f) != angular(g) + 1 {
                        (BigComplex::zero(prec), 0.0)
                    } else {
                        let e = w.pair(f, g, 1);
                        (e.value.mul_neg_i(), e.error)
                    }
                })
                .collect()
        })
        .collect())
}

/// T_q(V) truncated to k ≤ K:
/// q > 0: t_q M^{(q)}(V₁) + (1−t_q) M^{(q−1)}(V₂) + (1/2μ_q)·p_q(a*W + W*a)p_q,
/// q < 0: t_q M^{(|q|−1)}(V₂) + (1−t_q) M^{(|q|)}(V₁) + (1/2μ_q)·p(aW* + Wa*)p,
/// q = 0: M^{(0)}(V₁).
pub fn assemble_dirac_toeplitz(q: i64, v: &PotentialSpec, k_max: u32, p: &MagneticParams, prec: u32) -> Result<HermitianMatrix> {
    if k_max < 1 {
        return Err(Error::invalid("truncation K must be at least 1"));
    }
    if q == 0 {
        return Ok(assemble_landau_toeplitz(0, &v.v1, k_max, p, prec)?
            .with_provenance(format!("T_0(V), K={k_max}, b={}, m={}, {prec} bits", p.b, p.m)));
    }
    let h_gauge = match &v.w {
        None => None,
        Some(WProfile::RadialGauge { h }) => Some(h.clone()),
        Some(_) => {
            return Err(Error::unsupported(
                "only radial-gauge W = -i h(r) z has exact matrix elements; use the effective symbol instead",
            ))
        }
    };
    let t = t_coefficient(q, p, prec);
    let one_minus_t = Float::with_val(prec, 1 - t.clone());
    let aq = q.unsigned_abs() as u32;
    // (level carrying V1, level carrying V2)
    let (n1, n2, t1, t2) = if q > 0 { (aq, aq - 1, &t, &one_minus_t) } else { (aq, aq - 1, &one_minus_t, &t) };
    let mut h = assemble_landau_toeplitz(n1, &v.v1, k_max, p, prec)?.scaled(t1);
    h.add_scaled(&assemble_landau_toeplitz(n2, &v.v2, k_max, p, prec)?, t2);
    if let Some(hg) = h_gauge {
        let upper = level_basis(aq, k_max, p, prec)?;
        let lower = level_basis(aq - 1, k_max, p, prec)?;
        let sqrt_2bq = Float::with_val(prec, Float::with_val(prec, 2.0 * p.b) * aq).sqrt();
        let mu = landau_dirac_level(q, p, prec);
        let coef = Float::with_val(prec, &sqrt_2bq / (mu * 2u32));
        // q > 0: ⟨φ_{j,q−1}, W φ_{k,q}⟩ + conj⟨φ_{k,q−1}, W φ_{j,q}⟩
        // q < 0: conj⟨φ_{k,n}, W φ_{j,n+1}⟩ + ⟨φ_{j,n}, W φ_{k,n+1}⟩, n = |q|−1
        let m = w_matrix(&hg, &lower, &upper, p.b, prec)?;
        let dim = upper.len();
        for j in 0..dim {
            for k in j..dim {
                let entry = if q > 0 {
                    &m[j][k].0 + &m[k][j].0.conj()
                } else {
                    &m[k][j].0.conj() + &m[j][k].0
                };
                let err = m[j][k].1 + m[k][j].1;
                h.assembly_error += coef.to_f64().abs() * err;
                let mut cur = h.get(j, k).clone();
                cur.add_assign_ref(&entry.scale(&coef));
                h.set(j, k, cur);
            }
        }
    }
    h.provenance = format!("T_{q}(V), K={k_max}, b={}, m={}, {prec} bits", p.b, p.m);
    Ok(h)
}

/// (V_ε^−, V_ε^+) = V ∓ ε|V| componentwise for diagonal V.
pub fn epsilon_bracket(v: &PotentialSpec, eps: f64) -> Result<(PotentialSpec, PotentialSpec)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if v.w.is_some() {
        return Err(Error::unsupported("absolute value of a non-diagonal matrix potential"));
    }
    let (a_lo, a_hi) = v.v1.bracket(eps);
    let (b_lo, b_hi) = v.v2.bracket(eps);
    Ok((PotentialSpec::diagonal(a_lo, b_lo), PotentialSpec::diagonal(a_hi, b_hi)))
}

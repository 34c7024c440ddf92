//! Truncated matrices of D_0 and D_0 + V on the spinor basis.

use std::collections::HashMap;

use rayon::prelude::*;
use rug::Float;

use super::truncation::{Component, SpinorIndex, TruncationSpec};
use crate::error::{Error, Result};
use crate::fock::{build_basis_function, grid_matrix, radial_weights, BasisIndex, LadderFunction, MagneticParams, PotentialSpec, Profile, GRID_QUAD_TOL};
use crate::num::BigComplex;
use crate::toeplitz::HermitianMatrix;

#[derive(Clone, Debug)]
pub struct DiracMatrix {
    pub matrix: HermitianMatrix,
    pub basis: Vec<SpinorIndex>,
    pub truncation: TruncationSpec,
}

/// D_0 = [[m, a*], [a, −m]]: upper φ_{k,n} couples to lower φ_{k,n−1} with √(2bn).
pub fn assemble_free_dirac(p: &MagneticParams, t: &TruncationSpec, prec: u32) -> Result<DiracMatrix> {
    t.validate(p)?;
    let basis = t.basis();
    let pos: HashMap<SpinorIndex, usize> = basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut h = HermitianMatrix::zeros(basis.len(), prec)
        .with_provenance(format!("D_0, K={}, N={}, b={}, m={}, {prec} bits", t.k_max, t.n_max, p.b, p.m));
    let m = Float::with_val(prec, p.m);
    for (i, s) in basis.iter().enumerate() {
        match s.component {
            Component::Upper => {
                h.set(i, i, BigComplex::real(m.clone()));
                let n = s.index.n;
                if n >= 1 {
                    let low = SpinorIndex { component: Component::Lower, index: BasisIndex::new(s.index.k, n - 1) };
                    let j = pos[&low];
                    let c = Float::with_val(prec, Float::with_val(prec, 2.0 * p.b) * n).sqrt();
                    h.set(i, j, BigComplex::real(c));
                }
            }
            Component::Lower => h.set(i, i, BigComplex::real(Float::with_val(prec, -&m))),
        }
    }
    Ok(DiracMatrix { matrix: h, basis, truncation: t.clone() })
}

/// ⟨f_i, v f_j⟩ over one component; radial v only couples equal angular momentum.
fn component_block(v: &Profile, funcs: &[LadderFunction], b: f64, prec: u32) -> Result<(Vec<Vec<Option<BigComplex>>>, f64)> {
    let n = funcs.len();
    let mut out = vec![vec![None; n]; n];
    if v.is_zero() {
        return Ok((out, 0.0));
    }
    let mut err: f64 = 0.0;
    match v {
        Profile::Grid(g) => {
            let (m, e) = grid_matrix(g, funcs, funcs, GRID_QUAD_TOL)?;
            err = e;
            for i in 0..n {
                for j in i..n {
                    let z = if i == j { m[i][i] } else { 0.5 * (m[i][j] + m[j][i].conj()) };
                    out[i][j] = Some(BigComplex::new(Float::with_val(prec, z.re), Float::with_val(prec, z.im)));
                }
            }
        }
        _ => {
            let angular = |f: &LadderFunction| f.index.expect("basis index").angular_momentum();
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .filter(|&(i, j)| angular(&funcs[i]) == angular(&funcs[j]))
                .collect();
            let a_max = pairs.iter().map(|&(i, j)| funcs[i].max_moment_with(&funcs[j])).max().unwrap_or(0);
            let w = radial_weights(v, b, a_max, prec)?;
            let vals: Vec<_> = pairs.par_iter().map(|&(i, j)| w.pair(&funcs[i], &funcs[j], 0)).collect();
            for ((i, j), e) in pairs.into_iter().zip(vals) {
                err = err.max(e.error);
                out[i][j] = Some(e.value);
            }
        }
    }
    Ok((out, err))
}

/// D_0 + V for diagonal V = diag(V₁, V₂). Radial V keeps the total angular
/// index block structure with exact zeros across blocks.
pub fn assemble_perturbed_dirac(p: &MagneticParams, v: &PotentialSpec, t: &TruncationSpec, prec: u32) -> Result<DiracMatrix> {
    if !v.is_diagonal() {
        return Err(Error::unsupported("the spinor matrix takes diagonal potentials only"));
    }
    let mut d = assemble_free_dirac(p, t, prec)?;
    if v.v1.is_zero() && v.v2.is_zero() {
        return Ok(d);
    }
    let upper: Vec<usize> = (0..d.basis.len()).filter(|&i| d.basis[i].component == Component::Upper).collect();
    let lower: Vec<usize> = (0..d.basis.len()).filter(|&i| d.basis[i].component == Component::Lower).collect();
    let funcs = |idx: &[usize]| -> Result<Vec<LadderFunction>> {
        idx.par_iter().map(|&i| build_basis_function(d.basis[i].index, p, prec)).collect()
    };
    let fu = funcs(&upper)?;
    let fl = funcs(&lower)?;
    let (mu, eu) = component_block(&v.v1, &fu, p.b, prec)?;
    let (ml, el) = component_block(&v.v2, &fl, p.b, prec)?;
    for (idx, m) in [(&upper, mu), (&lower, ml)] {
        for (a, row) in m.into_iter().enumerate() {
            for (bb, e) in row.into_iter().enumerate() {
                if let Some(e) = e {
                    let (i, j) = (idx[a], idx[bb]);
                    let mut cur = d.matrix.get(i, j).clone();
                    cur.add_assign_ref(&e);
                    d.matrix.set(i, j, cur);
                }
            }
        }
    }
    d.matrix.assembly_error = eu.max(el);
    d.matrix.provenance = format!("D_0 + V, K={}, N={}, b={}, m={}, {prec} bits", t.k_max, t.n_max, p.b, p.m);
    Ok(d)
}

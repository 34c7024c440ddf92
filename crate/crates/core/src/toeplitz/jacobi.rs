//! Cyclic complex Jacobi eigensolver in arbitrary precision.

use rayon::prelude::*;
use rug::Float;

use super::matrix::HermitianMatrix;
use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::num::{check_precision, pow2, BigComplex};

pub const DEFAULT_MAX_SWEEPS: usize = 60;

/// Eigenvalues (descending) and matching unit eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenPairs {
    pub values: Vec<Float>,
    pub vectors: Vec<Vec<BigComplex>>,
    /// Achieved off-diagonal Frobenius norm relative to ‖H‖_F, worst block.
    pub relative_off_norm: f64,
}

struct BlockResult {
    values: Vec<Float>,
    vectors: Option<Vec<BigComplex>>,
    rel_off: f64,
}

fn off_norm_sq(a: &[BigComplex], n: usize, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += a[p * n + q].norm_sqr();
            }
        }
    }
    acc
}

/// Diagonalizes one dense block. Each rotation first removes the phase of
/// a_pq with a diagonal unitary, then applies a real Givens rotation.
fn jacobi_block(mut a: Vec<BigComplex>, n: usize, prec: u32, want_vectors: bool, max_sweeps: usize) -> Result<BlockResult> {
    let mut v = if want_vectors {
        let mut v = vec![BigComplex::zero(prec); n * n];
        for i in 0..n {
            v[i * n + i] = BigComplex::real(Float::with_val(prec, 1));
        }
        Some(v)
    } else {
        None
    };
    let mut norm_sq = Float::with_val(prec, 0);
    for e in &a {
        norm_sq += e.norm_sqr();
    }
    let norm = Float::with_val(prec, norm_sq.sqrt_ref());
    let rel = |off: &Float| -> f64 {
        if norm.is_zero() {
            0.0
        } else {
            (Float::with_val(prec, off.sqrt_ref()) / &norm).to_f64()
        }
    };
    if n == 1 || norm.is_zero() {
        let values = (0..n).map(|i| a[i * n + i].re.clone()).collect();
        return Ok(BlockResult { values, vectors: v, rel_off: 0.0 });
    }
    let required = Float::with_val(prec, &norm * pow2(prec, -(prec as i32) / 2));
    let target = Float::with_val(prec, &norm * pow2(prec, -(prec as i32) + 8));
    let skip = Float::with_val(prec, &norm * pow2(prec, -(prec as i32) - 8));
    let required_sq = Float::with_val(prec, required.square_ref());
    let target_sq = Float::with_val(prec, target.square_ref());
    let mut off = off_norm_sq(&a, n, prec);
    let mut sweeps = 0;
    while off > target_sq {
        if sweeps >= max_sweeps {
            if off <= required_sq {
                break;
            }
            return Err(Error::NonConvergence { sweeps, off_norm: rel(&off) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q].clone();
                let g = apq.abs();
                if g <= skip {
                    a[p * n + q] = BigComplex::zero(prec);
                    a[q * n + p] = BigComplex::zero(prec);
                    continue;
                }
                // unit phase u = a_pq/|a_pq|, applied as conj(u) on column q
                let uc = BigComplex::new(Float::with_val(prec, &apq.re / &g), -(Float::with_val(prec, &apq.im / &g)));
                let theta = Float::with_val(prec, &a[q * n + q].re - &a[p * n + p].re) / Float::with_val(prec, &g * 2u32);
                let root = (Float::with_val(prec, theta.square_ref()) + 1u32).sqrt();
                let t = if theta.is_sign_negative() {
                    -(Float::with_val(prec, 1) / (Float::with_val(prec, -&theta) + &root))
                } else {
                    Float::with_val(prec, 1) / (theta + &root)
                };
                let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
                let s = Float::with_val(prec, &t * &c);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let x = a[r * n + p].clone();
                    let y = &a[r * n + q] * &uc;
                    let new_p = &x.scale(&c) - &y.scale(&s);
                    let new_q = &x.scale(&s) + &y.scale(&c);
                    a[p * n + r] = new_p.conj();
                    a[q * n + r] = new_q.conj();
                    a[r * n + p] = new_p;
                    a[r * n + q] = new_q;
                }
                let tg = Float::with_val(prec, &t * &g);
                a[p * n + p].re -= &tg;
                a[q * n + q].re += &tg;
                a[p * n + q] = BigComplex::zero(prec);
                a[q * n + p] = BigComplex::zero(prec);
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let x = v[r * n + p].clone();
                        let y = &v[r * n + q] * &uc;
                        v[r * n + p] = &x.scale(&c) - &y.scale(&s);
                        v[r * n + q] = &x.scale(&s) + &y.scale(&c);
                    }
                }
            }
        }
        let new_off = off_norm_sq(&a, n, prec);
        let stalled = new_off >= off;
        off = new_off;
        if stalled && off <= required_sq {
            break;
        }
    }
    let values = (0..n).map(|i| a[i * n + i].re.clone()).collect();
    Ok(BlockResult { values, vectors: v, rel_off: rel(&off) })
}

fn solve(h: &HermitianMatrix, prec: u32, want_vectors: bool, max_sweeps: usize) -> Result<EigenPairs> {
    check_precision(prec)?;
    let n = h.dim();
    if n == 0 {
        return Err(Error::invalid("eigenvalues of an empty matrix"));
    }
    let comps = h.components();
    let blocks: Vec<Result<(Vec<usize>, BlockResult)>> = comps
        .into_par_iter()
        .map(|idx| {
            let m = idx.len();
            let mut a = Vec::with_capacity(m * m);
            for &i in &idx {
                for &j in &idx {
                    let e = h.get(i, j);
                    a.push(BigComplex::new(Float::with_val(prec, &e.re), Float::with_val(prec, &e.im)));
                }
            }
            jacobi_block(a, m, prec, want_vectors, max_sweeps).map(|r| (idx, r))
        })
        .collect();
    let mut pairs: Vec<(Float, Option<Vec<BigComplex>>)> = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for b in blocks {
        let (idx, r) = b?;
        worst = worst.max(r.rel_off);
        let m = idx.len();
        for (c, val) in r.values.into_iter().enumerate() {
            let vec = r.vectors.as_ref().map(|vv| {
                let mut full = vec![BigComplex::zero(prec); n];
                for (row, &i) in idx.iter().enumerate() {
                    full[i] = vv[row * m + c].clone();
                }
                full
            });
            pairs.push((val, vec));
        }
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));
    let relative_off_norm = worst;
    let (values, vectors): (Vec<Float>, Vec<Option<Vec<BigComplex>>>) = pairs.into_iter().unzip();
    Ok(EigenPairs { values, vectors: vectors.into_iter().flatten().collect(), relative_off_norm })
}

/// All eigenvalues, sorted descending. Connected components of the sparsity
/// pattern are diagonalized independently.
pub fn hermitian_eigenvalues(h: &HermitianMatrix, prec: u32) -> Result<Spectrum> {
    let e = solve(h, prec, false, DEFAULT_MAX_SWEEPS)?;
    Ok(Spectrum::new(e.values, prec, h.provenance.clone(), e.relative_off_norm))
}

/// Eigenvalues with eigenvectors.
pub fn hermitian_eigen(h: &HermitianMatrix, prec: u32) -> Result<EigenPairs> {
    solve(h, prec, true, DEFAULT_MAX_SWEEPS)
}

/// Like `hermitian_eigenvalues` with an explicit sweep cap.
pub fn hermitian_eigenvalues_capped(h: &HermitianMatrix, prec: u32, max_sweeps: usize) -> Result<Spectrum> {
    let e = solve(h, prec, false, max_sweeps)?;
    Ok(Spectrum::new(e.values, prec, h.provenance.clone(), e.relative_off_norm))
}

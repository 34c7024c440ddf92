//! Index of a pair of orthogonal projections in finite dimension and the
//! spectral shift Ξ(λ; A + M, A), with integer identity checks and random
//! trial suites.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Distance of a trace from the nearest integer beyond which rounding fails.
pub const INTEGER_TOL: f64 = 1e-6;
/// Relative distance of λ from any eigenvalue below which λ is inadmissible.
pub const ADMISSIBLE_TOL: f64 = 1e-8;
const PROJECTION_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct ProjectionPair {
    pub p: CMatrix,
    pub q: CMatrix,
}

fn op_norm_bound(a: &CMatrix) -> f64 {
    a.norm().max(1.0)
}

fn check_projection(p: &CMatrix, name: &str) -> Result<()> {
    if !p.is_square() {
        return Err(Error::invalid(format!("{name} is not square")));
    }
    let scale = op_norm_bound(p);
    let herm = (p - p.adjoint()).norm();
    let idem = (p * p - p).norm();
    if herm > PROJECTION_TOL * scale || idem > PROJECTION_TOL * scale {
        return Err(Error::invalid(format!(
            "{name} is not an orthogonal projection (‖P − P*‖ = {herm:e}, ‖P² − P‖ = {idem:e})"
        )));
    }
    Ok(())
}

impl ProjectionPair {
    pub fn new(p: CMatrix, q: CMatrix) -> Result<Self> {
        check_projection(&p, "P")?;
        check_projection(&q, "Q")?;
        if p.nrows() != q.nrows() {
            return Err(Error::invalid(format!("dimension mismatch: {} vs {}", p.nrows(), q.nrows())));
        }
        Ok(ProjectionPair { p, q })
    }

    pub fn dim(&self) -> usize {
        self.p.nrows()
    }
}

/// Numerical rank with singular value threshold dim·ε·‖X‖.
pub fn numerical_rank(x: &CMatrix) -> usize {
    if x.is_empty() {
        return 0;
    }
    let sv = x.clone().singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let thresh = x.nrows().max(x.ncols()) as f64 * f64::EPSILON * top;
    sv.iter().filter(|&&s| s > thresh && top > 0.0).count()
}

fn round_integer(x: f64, what: &str) -> Result<i64> {
    let r = x.round();
    if (x - r).abs() > INTEGER_TOL {
        return Err(Error::NumericalRank(format!("{what} = {x} is not within {INTEGER_TOL:e} of an integer")));
    }
    Ok(r as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexValue {
    /// Rounded Tr(P − Q).
    pub trace: i64,
    /// dim(Ran P ∩ Ker Q) − dim(Ran Q ∩ Ker P).
    pub kernel: i64,
}

/// dim(Ran P ∩ Ker Q) = rank P − rank QP.
fn range_kernel_dim(p: &CMatrix, q: &CMatrix) -> i64 {
    numerical_rank(p) as i64 - numerical_rank(&(q * p)) as i64
}

/// Index(P, Q) by the trace and by kernel dimensions; the two must agree.
pub fn index_pair_both(pp: &ProjectionPair) -> Result<IndexValue> {
    let trace = round_integer((&pp.p - &pp.q).trace().re, "Tr(P − Q)")?;
    let kernel = range_kernel_dim(&pp.p, &pp.q) - range_kernel_dim(&pp.q, &pp.p);
    if trace != kernel {
        return Err(Error::NumericalRank(format!("trace index {trace} disagrees with kernel index {kernel}")));
    }
    Ok(IndexValue { trace, kernel })
}

pub fn index_pair(pp: &ProjectionPair) -> Result<i64> {
    index_pair_both(pp).map(|v| v.trace)
}

fn check_hermitian(a: &CMatrix, name: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::invalid(format!("{name} is not square")));
    }
    if (a - a.adjoint()).norm() > 1e-12 * op_norm_bound(a) {
        return Err(Error::invalid(format!("{name} is not Hermitian")));
    }
    Ok(())
}

/// E_A(−∞, λ) together with its rank; fails when λ is within the admissibility
/// distance of an eigenvalue.
pub fn spectral_projection_below(a: &CMatrix, lambda: f64) -> Result<(CMatrix, usize)> {
    let eig = SymmetricEigen::new(a.clone());
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, e| m.max(e.abs())).max(lambda.abs());
    let n = a.nrows();
    let mut proj = CMatrix::zeros(n, n);
    let mut rank = 0;
    for (i, &e) in eig.eigenvalues.iter().enumerate() {
        let dist = (e - lambda).abs();
        if dist <= ADMISSIBLE_TOL * scale {
            return Err(Error::Inadmissible { lambda, distance: dist });
        }
        if e < lambda {
            let v = eig.eigenvectors.column(i);
            proj += v * v.adjoint();
            rank += 1;
        }
    }
    Ok((proj, rank))
}

/// Number of eigenvalues in [λ1, λ2).
fn count_in(a: &CMatrix, l1: f64, l2: f64) -> usize {
    SymmetricEigen::new(a.clone()).eigenvalues.iter().filter(|&&e| e >= l1 && e < l2).count()
}

/// Ξ(λ; A + M, A) = Index(E_A(−∞, λ), E_{A+M}(−∞, λ)).
pub fn xi(lambda: f64, a: &CMatrix, m: &CMatrix) -> Result<i64> {
    xi_both(lambda, a, m).map(|v| v.trace)
}

fn xi_both(lambda: f64, a: &CMatrix, m: &CMatrix) -> Result<IndexValue> {
    check_hermitian(a, "A")?;
    check_hermitian(m, "M")?;
    if a.shape() != m.shape() {
        return Err(Error::invalid("A and M have different shapes"));
    }
    let (ea, _) = spectral_projection_below(a, lambda)?;
    let (eb, _) = spectral_projection_below(&(a + m), lambda)?;
    index_pair_both(&ProjectionPair { p: ea, q: eb })
}

#[derive(Clone, Debug, Serialize)]
pub struct Le42Report {
    pub xi_lo: i64,
    pub xi_hi: i64,
    pub count_b: usize,
    pub count_a: usize,
    pub holds: bool,
}

/// Ξ(λ1) − Ξ(λ2) against 𝒩([λ1, λ2); A + M) − 𝒩([λ1, λ2); A).
pub fn verify_le42(a: &CMatrix, m: &CMatrix, l1: f64, l2: f64) -> Result<Le42Report> {
    if !(l1 < l2) {
        return Err(Error::invalid(format!("need λ1 < λ2, got {l1} and {l2}")));
    }
    let xi_lo = xi(l1, a, m)?;
    let xi_hi = xi(l2, a, m)?;
    let count_b = count_in(&(a + m), l1, l2);
    let count_a = count_in(a, l1, l2);
    Ok(Le42Report { xi_lo, xi_hi, count_b, count_a, holds: xi_lo - xi_hi == count_b as i64 - count_a as i64 })
}

/// Positive and negative parts (|M| ± M)/2 from the spectral decomposition.
pub fn split_signs(m: &CMatrix) -> (CMatrix, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let (mut plus, mut minus) = (CMatrix::zeros(n, n), CMatrix::zeros(n, n));
    for (i, &e) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let outer = v * v.adjoint();
        if e > 0.0 {
            plus += outer * Complex64::from(e);
        } else if e < 0.0 {
            minus += outer * Complex64::from(-e);
        }
    }
    (plus, minus)
}

/// (rank M_+, rank M_−) with the threshold dim·ε·‖M‖ applied to the eigenvalues of M.
pub fn sign_ranks(m: &CMatrix) -> (usize, usize) {
    let ev = SymmetricEigen::new(m.clone()).eigenvalues;
    let top = ev.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let thresh = m.nrows() as f64 * f64::EPSILON * top;
    (ev.iter().filter(|&&e| e > thresh).count(), ev.iter().filter(|&&e| e < -thresh).count())
}

#[derive(Clone, Debug, Serialize)]
pub struct RankBoundReport {
    pub xi: i64,
    pub rank_plus: usize,
    pub rank_minus: usize,
    pub holds: bool,
}

/// −rank M_− ≤ Ξ(λ; A + M, A) ≤ rank M_+.
pub fn verify_rank_bounds(a: &CMatrix, m: &CMatrix, lambda: f64) -> Result<RankBoundReport> {
    let x = xi(lambda, a, m)?;
    let (rp, rm) = sign_ranks(m);
    Ok(RankBoundReport { xi: x, rank_plus: rp, rank_minus: rm, holds: -(rm as i64) <= x && x <= rp as i64 })
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub xi1: i64,
    pub xi2: i64,
    pub monotone: bool,
    /// Index(E_A, E_{A+M2}), Index(E_{A+M2}, E_{A+M1}), Index(E_A, E_{A+M1}).
    pub chain: [i64; 3],
    pub additive: bool,
}

/// M1 ≥ M2 implies Ξ(λ; A + M1, A) ≥ Ξ(λ; A + M2, A); also checks that the
/// index telescopes over E_A, E_{A+M2}, E_{A+M1}.
pub fn verify_monotonicity(a: &CMatrix, m1: &CMatrix, m2: &CMatrix, lambda: f64) -> Result<MonotonicityReport> {
    check_hermitian(m1, "M1")?;
    check_hermitian(m2, "M2")?;
    let diff = m1 - m2;
    let low = SymmetricEigen::new(diff.clone()).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if low < -1e-10 * op_norm_bound(&diff) {
        return Err(Error::hypothesis(format!("M1 − M2 is not positive semidefinite (min eigenvalue {low:e})")));
    }
    let xi1 = xi(lambda, a, m1)?;
    let xi2 = xi(lambda, a, m2)?;
    let (p, _) = spectral_projection_below(a, lambda)?;
    let (q, _) = spectral_projection_below(&(a + m2), lambda)?;
    let (r, _) = spectral_projection_below(&(a + m1), lambda)?;
    let pq = index_pair(&ProjectionPair { p: p.clone(), q: q.clone() })?;
    let qr = index_pair(&ProjectionPair { p: q, q: r.clone() })?;
    let pr = index_pair(&ProjectionPair { p, q: r })?;
    Ok(MonotonicityReport { xi1, xi2, monotone: xi1 >= xi2, chain: [pq, qr, pr], additive: pr == pq + qr })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&g + g.adjoint()) * Complex64::from(0.5 * scale)
}

/// Σ s_i u_i u_i* over `rank` random unit vectors with signed weights.
pub fn random_low_rank<R: Rng>(rng: &mut R, n: usize, rank: usize, sign: Option<f64>) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for _ in 0..rank {
        let u = nalgebra::DVector::from_fn(n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let u = &u / Complex64::from(u.norm());
        let s = sign.unwrap_or_else(|| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }) * rng.gen_range(0.2..3.0);
        m += &u * u.adjoint() * Complex64::from(s);
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Le42,
    RankBounds,
    Monotonicity,
    Additivity,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub failures: usize,
    /// Admissibility resamples of λ.
    pub resamples: usize,
    pub first_failure: Option<String>,
}

const MAX_RESAMPLES: usize = 64;

fn one_trial(suite: Suite, rng: &mut ChaCha8Rng, max_dim: usize) -> (Result<bool>, usize) {
    let n = rng.gen_range(2..=max_dim.max(2));
    let a = random_hermitian(rng, n, 2.0);
    let r = rng.gen_range(0..=n);
    let m = random_low_rank(rng, n, r, None);
    let r_extra = rng.gen_range(0..=n.min(4));
    let m_extra = random_low_rank(rng, n, r_extra, Some(1.0));
    let mut resamples = 0;
    loop {
        let l1 = rng.gen_range(-4.0..4.0);
        let l2 = l1 + rng.gen_range(0.1..4.0);
        let out = match suite {
            Suite::Le42 => verify_le42(&a, &m, l1, l2).map(|r| r.holds),
            Suite::RankBounds => verify_rank_bounds(&a, &m, l1).map(|r| r.holds),
            Suite::Monotonicity => verify_monotonicity(&a, &(&m + &m_extra), &m, l1).map(|r| r.monotone),
            Suite::Additivity => verify_monotonicity(&a, &(&m + &m_extra), &m, l1).map(|r| r.additive),
        };
        match out {
            Err(Error::Inadmissible { .. }) if resamples < MAX_RESAMPLES => resamples += 1,
            other => return (other, resamples),
        }
    }
}

/// Runs `trials` independent random cases of one identity; trial i uses the
/// stream seeded by (seed, i), so results do not depend on scheduling.
pub fn run_suite(suite: Suite, seed: u64, trials: usize, max_dim: usize) -> SuiteReport {
    let results: Vec<(Result<bool>, usize)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            one_trial(suite, &mut rng, max_dim)
        })
        .collect();
    let mut failures = 0;
    let mut first_failure = None;
    let mut resamples = 0;
    for (i, (r, s)) in results.into_iter().enumerate() {
        resamples += s;
        let msg = match r {
            Ok(true) => continue,
            Ok(false) => format!("trial {i}: identity violated"),
            Err(e) => format!("trial {i}: {e}"),
        };
        failures += 1;
        first_failure.get_or_insert(msg);
    }
    SuiteReport { suite, seed, trials, failures, resamples, first_failure }
}

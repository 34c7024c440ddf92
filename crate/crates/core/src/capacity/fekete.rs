//! Transfinite diameter by Fekete-point optimization, the Chebyshev upper
//! bound and the extrapolated capacity estimate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::region::{Curve, Region};
use crate::error::{Error, Result};

/// Boundary candidates for Leja seeding.
const POOL_SIZE: usize = 8000;
/// Boundary samples for sup norms.
const SUP_SAMPLES: usize = 20_000;
/// Final coordinate-ascent step relative to total boundary length.
const STEP_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 50_000;
/// Relative slack for monotonicity and bracketing of optimized δ_n.
pub const OPTIMIZER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct TransfiniteDiameter {
    pub n: usize,
    pub value: f64,
    pub points: Vec<[f64; 2]>,
    pub sweeps: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapacityEstimate {
    /// δ_n for n = 2..=n_max.
    pub lower_seq: Vec<f64>,
    /// Chebyshev values for n = 1..=n_max.
    pub upper_seq: Vec<f64>,
    pub extrapolated: f64,
    pub n_max: usize,
    /// Range of n used by the fit ln δ_n = ln Cap + c ln n / n + d / n.
    pub fit_window: [usize; 2],
    pub converged: bool,
    /// δ_n nonincreasing up to `OPTIMIZER_TOL`.
    pub monotone: bool,
    pub tolerance: f64,
}

struct Pool {
    curves: Vec<Curve>,
    /// (curve, arclength, point)
    candidates: Vec<(usize, f64, Complex64)>,
    total_length: f64,
}

impl Pool {
    fn new(e: &Region, size: usize) -> Result<Pool> {
        e.validate()?;
        let curves = e.boundary_curves();
        let total_length: f64 = curves.iter().map(Curve::length).sum();
        let mut candidates = Vec::with_capacity(size);
        for (ci, cv) in curves.iter().enumerate() {
            let m = ((size as f64 * cv.length() / total_length).ceil() as usize).max(2);
            let denom = if cv.is_closed() { m } else { m - 1 };
            for i in 0..m {
                let s = cv.length() * i as f64 / denom as f64;
                let z = cv.point(s);
                if e.contains(z) {
                    candidates.push((ci, s, z));
                }
            }
        }
        if candidates.len() < 2 {
            return Err(Error::invalid("region boundary yields fewer than two points"));
        }
        Ok(Pool { curves, candidates, total_length })
    }

    /// Index of the candidate maximizing Σ ln|z − p| over the given points;
    /// without points, the one farthest from `anchor`.
    fn leja_next(&self, points: &[Complex64], anchor: Complex64) -> usize {
        let score = |z: Complex64| -> f64 {
            if points.is_empty() {
                (z - anchor).norm()
            } else {
                points.iter().map(|p| (z - p).norm().ln()).sum()
            }
        };
        let mut best = (0, f64::NEG_INFINITY);
        for (i, &(_, _, z)) in self.candidates.iter().enumerate() {
            let v = score(z);
            if v > best.1 {
                best = (i, v);
            }
        }
        best.0
    }
}

/// First n Leja points of the boundary pool, seeded farthest from the box center.
pub fn leja_points(e: &Region, n: usize) -> Result<Vec<Complex64>> {
    let pool = Pool::new(e, POOL_SIZE)?;
    let anchor = e.centroid_hint();
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        let i = pool.leja_next(&pts, anchor);
        pts.push(pool.candidates[i].2);
    }
    Ok(pts)
}

struct Ascent<'a> {
    pool: &'a Pool,
    region: &'a Region,
    state: Vec<(usize, f64)>,
    z: Vec<Complex64>,
    sweeps: usize,
}

impl<'a> Ascent<'a> {
    fn push_leja(&mut self) {
        let i = self.pool.leja_next(&self.z, self.region.centroid_hint());
        let (ci, s, z) = self.pool.candidates[i];
        self.state.push((ci, s));
        self.z.push(z);
    }

    fn partial(&self, i: usize, w: Complex64) -> f64 {
        self.z.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| (w - p).norm().ln()).sum()
    }

    /// Cyclic coordinate ascent with a halving step; returns convergence.
    fn run(&mut self) -> bool {
        let n = self.z.len();
        let mut step = self.pool.total_length / (4.0 * n as f64);
        let floor = STEP_TOL * self.pool.total_length;
        while step > floor {
            let mut moved = false;
            for i in 0..n {
                let (ci, s) = self.state[i];
                let cv = &self.pool.curves[ci];
                let mut best = (s, self.partial(i, self.z[i]));
                for k in [-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0] {
                    let t = cv.clamp(s + k * step);
                    let w = cv.point(t);
                    if !self.region.contains(w) {
                        continue;
                    }
                    let v = self.partial(i, w);
                    if v > best.1 {
                        best = (t, v);
                    }
                }
                if best.0 != s {
                    self.state[i].1 = best.0;
                    self.z[i] = cv.point(best.0);
                    moved = true;
                }
            }
            self.sweeps += 1;
            if self.sweeps >= MAX_SWEEPS {
                return false;
            }
            if !moved {
                step *= 0.5;
            }
        }
        true
    }

    fn value(&self) -> f64 {
        geometric_mean_distance(&self.z)
    }
}

/// (∏_{i<j} |z_i − z_j|)^{2/(n(n−1))}, accumulated in log space.
pub fn geometric_mean_distance(z: &[Complex64]) -> f64 {
    let n = z.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += (z[i] - z[j]).norm().ln();
        }
    }
    (2.0 * s / (n * (n - 1)) as f64).exp()
}

fn result(a: &Ascent, converged: bool) -> TransfiniteDiameter {
    TransfiniteDiameter {
        n: a.z.len(),
        value: a.value(),
        points: a.z.iter().map(|z| [z.re, z.im]).collect(),
        sweeps: a.sweeps,
        converged,
    }
}

/// Lower bound on δ_n: Leja seeding, then cyclic coordinate ascent along the boundary.
pub fn transfinite_diameter(e: &Region, n: usize) -> Result<TransfiniteDiameter> {
    if n < 2 {
        return Err(Error::invalid(format!("transfinite diameter needs n ≥ 2, got {n}")));
    }
    let pool = Pool::new(e, POOL_SIZE)?;
    let mut a = Ascent { pool: &pool, region: e, state: Vec::new(), z: Vec::new(), sweeps: 0 };
    for _ in 0..n {
        a.push_leja();
    }
    let ok = a.run();
    Ok(result(&a, ok))
}

/// δ_n for n = 2..=n_max, each warm-started from the previous optimum plus one Leja point.
pub fn transfinite_sequence(e: &Region, n_max: usize) -> Result<Vec<TransfiniteDiameter>> {
    if n_max < 2 {
        return Err(Error::invalid(format!("transfinite diameter needs n ≥ 2, got {n_max}")));
    }
    let pool = Pool::new(e, POOL_SIZE)?;
    let mut a = Ascent { pool: &pool, region: e, state: Vec::new(), z: Vec::new(), sweeps: 0 };
    a.push_leja();
    let mut out = Vec::with_capacity(n_max - 1);
    for _ in 2..=n_max {
        a.push_leja();
        a.sweeps = 0;
        let ok = a.run();
        out.push(result(&a, ok));
    }
    Ok(out)
}

/// (sup_E |∏(z − r_i)|)^{1/n} with the sup over dense boundary samples,
/// refined locally around the best sample.
pub fn chebyshev_bound_with_roots(e: &Region, roots: &[Complex64]) -> Result<f64> {
    if roots.is_empty() {
        return Err(Error::invalid("Chebyshev bound needs at least one root"));
    }
    let pool = Pool::new(e, SUP_SAMPLES)?;
    let lnf = |z: Complex64| -> f64 { roots.iter().map(|r| (z - r).norm().ln()).sum() };
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &(_, _, z)) in pool.candidates.iter().enumerate() {
        let v = lnf(z);
        if v > best.1 {
            best = (i, v);
        }
    }
    let (ci, s0, _) = pool.candidates[best.0];
    let cv = &pool.curves[ci];
    let h = pool.total_length / SUP_SAMPLES as f64;
    let mut sup = best.1;
    let (mut lo, mut hi) = (s0 - h, s0 + h);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        let fa = eval_in(e, cv, a, &lnf);
        let fb = eval_in(e, cv, b, &lnf);
        sup = sup.max(fa).max(fb);
        if fa > fb {
            hi = b;
        } else {
            lo = a;
        }
    }
    Ok((sup / roots.len() as f64).exp())
}

fn eval_in(e: &Region, cv: &Curve, s: f64, f: &impl Fn(Complex64) -> f64) -> f64 {
    let z = cv.point(cv.clamp(s));
    if e.contains(z) {
        f(z)
    } else {
        f64::NEG_INFINITY
    }
}

/// Chebyshev bound with the first n Leja points as roots.
pub fn chebyshev_bound(e: &Region, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("Chebyshev bound needs n ≥ 1"));
    }
    chebyshev_bound_with_roots(e, &leja_points(e, n)?)
}

/// Least squares fit of ln δ_n = ln Cap + c ln n / n + d / n; returns Cap.
pub fn extrapolate(ns: &[usize], deltas: &[f64]) -> Result<f64> {
    if ns.len() < 3 || ns.len() != deltas.len() {
        return Err(Error::InsufficientData { needed: 3, usable: ns.len().min(deltas.len()) });
    }
    let x = DMatrix::from_fn(ns.len(), 3, |i, j| {
        let n = ns[i] as f64;
        match j {
            0 => 1.0,
            1 => n.ln() / n,
            _ => 1.0 / n,
        }
    });
    let y = DVector::from_iterator(deltas.len(), deltas.iter().map(|d| d.ln()));
    let sol = x.svd(true, true).solve(&y, 1e-14).map_err(|e| Error::NumericalRank(e.to_string()))?;
    Ok(sol[0].exp())
}

/// Sequences up to n_max and the extrapolated capacity from the last third.
pub fn capacity_estimate(e: &Region, n_max: usize) -> Result<CapacityEstimate> {
    if n_max < 11 {
        return Err(Error::InsufficientData { needed: 11, usable: n_max });
    }
    let seq = transfinite_sequence(e, n_max)?;
    let lower_seq: Vec<f64> = seq.iter().map(|t| t.value).collect();
    let converged = seq.iter().all(|t| t.converged);
    let leja = leja_points(e, n_max)?;
    let upper_seq = (1..=n_max).map(|n| chebyshev_bound_with_roots(e, &leja[..n])).collect::<Result<Vec<_>>>()?;
    let lo = n_max - (n_max - 1) / 3;
    let ns: Vec<usize> = (lo..=n_max).collect();
    let extrapolated = extrapolate(&ns, &lower_seq[lo - 2..])?;
    let monotone = lower_seq.windows(2).all(|w| w[1] <= w[0] * (1.0 + OPTIMIZER_TOL));
    Ok(CapacityEstimate {
        lower_seq,
        upper_seq,
        extrapolated,
        n_max,
        fit_window: [lo, n_max],
        converged,
        monotone,
        tolerance: OPTIMIZER_TOL,
    })
}

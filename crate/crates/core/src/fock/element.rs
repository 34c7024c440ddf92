//! Matrix elements ⟨f, v g⟩ of multiplication operators in the ladder basis.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;

use super::gamma::{full_gaussian_moment, step_average};
use super::ladder::LadderFunction;
use super::profile::{Grid2D, Profile};
use super::radial::SmoothRadial;
use crate::error::{Error, Result};
use crate::num::{ln_factorial, BigComplex};
use crate::quad;

/// Relative tolerance for smooth radial averages.
pub const RADIAL_QUAD_TOL: f64 = 1e-14;
/// Absolute tolerance for sampled-grid quadrature.
pub const GRID_QUAD_TOL: f64 = 1e-7;
const MAX_GRID_CELLS: usize = 2048;

#[derive(Clone, Debug)]
pub struct Element {
    pub value: BigComplex,
    /// Estimated absolute error; zero for step profiles up to rounding.
    pub error: f64,
}

/// Radial moments w(a) = ∫ |z|^{2a} v(|z|) e^{−b|z|²/2} dm for a = 0..=a_max.
#[derive(Clone, Debug)]
pub struct RadialWeights {
    pub weights: Vec<Float>,
    pub errors: Vec<f64>,
}

impl RadialWeights {
    pub fn get(&self, a: u32) -> Option<&Float> {
        self.weights.get(a as usize)
    }

    pub fn max_index(&self) -> u32 {
        self.weights.len() as u32 - 1
    }

    /// ⟨f, v g⟩ from these weights; `shift` = 1 pairs f against z·g.
    pub fn pair(&self, f: &LadderFunction, g: &LadderFunction, shift: u32) -> Element {
        let value = f.pair_with(g, |a| self.get(a), shift);
        let mut error = 0.0;
        for (&(i, j), c) in &f.coeffs {
            for (&(ip, jp), cp) in &g.coeffs {
                if ip as i64 + shift as i64 - jp as i64 == i as i64 - j as i64 {
                    let a = (j + ip + shift) as usize;
                    let e = self.errors.get(a).copied().unwrap_or(0.0);
                    if e > 0.0 {
                        error += c.abs().to_f64() * cp.abs().to_f64() * e;
                    }
                }
            }
        }
        Element { value, error }
    }
}

pub fn radial_weights(v: &Profile, b: f64, a_max: u32, prec: u32) -> Result<RadialWeights> {
    match v {
        Profile::Step(s) => {
            let weights: Vec<Float> = (0..=a_max)
                .into_par_iter()
                .map(|a| full_gaussian_moment(a, b, prec) * step_average(a, s, b, prec))
                .collect();
            Ok(RadialWeights { errors: vec![0.0; weights.len()], weights })
        }
        Profile::Smooth(s) => smooth_weights(s, b, a_max, prec),
        Profile::Grid(_) => Err(Error::unsupported("radial moments of a sampled grid profile")),
    }
}

/// Gamma-density averages E[v(√(2u/b))], u ~ Gamma(a+1), by composite
/// Gauss-Legendre on panels split at the profile's breakpoints. Node values
/// are shared by every a; the panel count doubles until the relative change
/// is below tolerance.
fn smooth_weights(s: &SmoothRadial, b: f64, a_max: u32, prec: u32) -> Result<RadialWeights> {
    let r_max = s.support_radius();
    let u_max = 0.5 * b * r_max * r_max;
    let mut cuts = vec![0.0];
    cuts.extend(s.breakpoints().into_iter().map(|r| 0.5 * b * r * r).filter(|&u| u < u_max));
    cuts.push(u_max);
    let layout = |per_unit: f64| -> Vec<(f64, f64)> {
        let mut panels = Vec::new();
        for w in cuts.windows(2) {
            let n = (((w[1] - w[0]) * per_unit).ceil() as usize).max(2);
            let h = (w[1] - w[0]) / n as f64;
            panels.extend((0..n).map(|i| (w[0] + i as f64 * h, w[0] + (i + 1) as f64 * h)));
        }
        panels
    };
    // signed and absolute averages; the tolerance is relative to the latter
    let averages = |panels: &[(f64, f64)]| -> Vec<(f64, f64)> {
        let nodes: Vec<(f64, f64, f64)> = panels
            .par_iter()
            .flat_map_iter(|&(lo, hi)| {
                quad::panel_nodes(lo, hi).into_iter().map(|(u, w)| (u, w, s.value((2.0 * u / b).sqrt())))
            })
            .collect();
        (0..=a_max)
            .into_par_iter()
            .map(|a| {
                let lf = ln_factorial(a as u64);
                nodes.iter().fold((0.0, 0.0), |acc, &(u, w, v)| {
                    let ln_rho = if a == 0 { -u } else { a as f64 * u.ln() - u - lf };
                    let t = w * ln_rho.exp();
                    (acc.0 + t * v, acc.1 + t * v.abs())
                })
            })
            .collect()
    };
    let mut per_unit = 2.0;
    let mut coarse = averages(&layout(per_unit));
    loop {
        per_unit *= 2.0;
        let fine = averages(&layout(per_unit));
        let errs: Vec<f64> = fine.iter().zip(&coarse).map(|(f, c)| (f.0 - c.0).abs()).collect();
        let ok = fine
            .iter()
            .zip(&errs)
            .all(|(f, e)| *e <= RADIAL_QUAD_TOL * f.1 || f.1 < 1e-290);
        if ok {
            let weights = fine
                .iter()
                .enumerate()
                .map(|(a, &avg)| full_gaussian_moment(a as u32, b, prec) * avg.0)
                .collect();
            let errors = errs
                .iter()
                .enumerate()
                .map(|(a, e)| e.max(f64::EPSILON * fine[a].1) * full_gaussian_moment(a as u32, b, 64).to_f64())
                .collect();
            return Ok(RadialWeights { weights, errors });
        }
        if per_unit > 512.0 {
            let worst = fine
                .iter()
                .zip(&errs)
                .map(|(f, e)| if f.1 > 0.0 { e / f.1 } else { *e })
                .fold(0.0, f64::max);
            return Err(Error::Quadrature { achieved: worst, tolerance: RADIAL_QUAD_TOL });
        }
        coarse = fine;
    }
}

/// ⟨f, v g⟩ for a scalar profile.
pub fn matrix_element(v: &Profile, f: &LadderFunction, g: &LadderFunction, prec: u32) -> Result<Element> {
    if f.b != g.b {
        return Err(Error::invalid("basis functions use different field amplitudes"));
    }
    match v {
        Profile::Grid(grid) => {
            let (m, err) = grid_matrix(grid, std::slice::from_ref(f), std::slice::from_ref(g), GRID_QUAD_TOL)?;
            let z = m[0][0];
            Ok(Element {
                value: BigComplex::new(Float::with_val(prec, z.re), Float::with_val(prec, z.im)),
                error: err,
            })
        }
        _ => {
            let w = radial_weights(v, f.b, f.max_moment_with(g), prec)?;
            Ok(w.pair(f, g, 0))
        }
    }
}

/// Matrix ⟨f_i, v g_j⟩ by the midpoint tensor rule on the grid's bounding
/// box, doubling the resolution until the largest entry change is ≤ tol.
pub fn grid_matrix(
    v: &Grid2D,
    fs: &[LadderFunction],
    gs: &[LadderFunction],
    tol: f64,
) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let [x0, x1, y0, y1] = v.bounding_box();
    let fe: Vec<_> = fs.iter().map(|f| f.evaluator()).collect();
    let ge: Vec<_> = gs.iter().map(|g| g.evaluator()).collect();
    let eval = |n: usize| -> Vec<Vec<Complex64>> {
        let hx = (x1 - x0) / n as f64;
        let hy = (y1 - y0) / n as f64;
        let rows: Vec<Vec<Vec<Complex64>>> = (0..n)
            .into_par_iter()
            .map(|jy| {
                let y = y0 + (jy as f64 + 0.5) * hy;
                let mut acc = vec![vec![Complex64::new(0.0, 0.0); gs.len()]; fs.len()];
                for ix in 0..n {
                    let x = x0 + (ix as f64 + 0.5) * hx;
                    let vv = v.value(x, y);
                    if vv == 0.0 {
                        continue;
                    }
                    let fv: Vec<Complex64> = fe.iter().map(|e| e.eval(x, y).conj()).collect();
                    let gv: Vec<Complex64> = ge.iter().map(|e| e.eval(x, y)).collect();
                    for (a, fa) in fv.iter().enumerate() {
                        for (c, gc) in gv.iter().enumerate() {
                            acc[a][c] += fa * gc * vv;
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![vec![Complex64::new(0.0, 0.0); gs.len()]; fs.len()];
        for r in rows {
            for (a, row) in r.into_iter().enumerate() {
                for (c, z) in row.into_iter().enumerate() {
                    total[a][c] += z;
                }
            }
        }
        let area = hx * hy;
        total.iter().map(|r| r.iter().map(|z| z * area).collect()).collect()
    };
    let mut n = 64;
    let mut prev = eval(n);
    loop {
        n *= 2;
        let cur = eval(n);
        let diff = cur
            .iter()
            .flatten()
            .zip(prev.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if diff <= tol {
            return Ok((cur, diff));
        }
        if n >= MAX_GRID_CELLS {
            return Err(Error::Quadrature { achieved: diff, tolerance: tol });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_basis_function, BasisIndex, MagneticParams, RadialStep};

    #[test]
    fn disk_element_level_zero() {
        let p = MagneticParams::new(2.0, 0.0).unwrap();
        let f = build_basis_function(BasisIndex::new(0, 0), &p, 128).unwrap();
        let v = Profile::Step(RadialStep::disk(1.3, 1.0).unwrap());
        let e = matrix_element(&v, &f, &f, 128).unwrap();
        let want = 1.0 - (-1.69f64).exp();
        assert!((e.value.re.to_f64() - want).abs() < 1e-15);
    }

    #[test]
    fn smooth_matches_step_for_polynomial() {
        // (1 − r²) on the unit disk against the exact polynomial moment:
        // ⟨φ00, v φ00⟩ = (b/2π)·2π ∫_0^1 (1 − r²) e^{−b r²/2} r dr
        let p = MagneticParams::new(2.0, 0.0).unwrap();
        let f = build_basis_function(BasisIndex::new(0, 0), &p, 128).unwrap();
        let v = Profile::Smooth(SmoothRadial::poly_bump(1.0, 1.0, 1).unwrap());
        let e = matrix_element(&v, &f, &f, 128).unwrap();
        // ∫_0^1 (1−u) e^{−u} du = e^{−1}
        let want = (-1.0f64).exp();
        assert!((e.value.re.to_f64() - want).abs() < 1e-14);
    }

    #[test]
    fn grid_matches_radial_step_roughly() {
        let p = MagneticParams::new(2.0, 0.0).unwrap();
        let f = build_basis_function(BasisIndex::new(1, 0), &p, 128).unwrap();
        let r = 1.5;
        let g = Grid2D::sample(-2.0, -2.0, 0.01, 0.01, 401, 401, |x, y| (1.0 - (x * x + y * y) / (r * r)).max(0.0)).unwrap();
        let smooth = Profile::Smooth(SmoothRadial::poly_bump(1.0, r, 1).unwrap());
        let a = matrix_element(&Profile::Grid(g), &f, &f, 128).unwrap();
        let b = matrix_element(&smooth, &f, &f, 128).unwrap();
        assert!((a.value.re.to_f64() - b.value.re.to_f64()).abs() < 1e-4);
        assert!(a.value.im.to_f64().abs() < 1e-6);
    }
}

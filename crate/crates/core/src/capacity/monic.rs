//! Minimal L²(w dm) norms of monic polynomials via Gram determinants.

use rug::Float;

use crate::error::{Error, Result};
use crate::fock::{Grid2D, Profile, RadialStep, SmoothRadial};
use crate::num::{pi, powu, BigComplex};
use crate::quad;

const MOMENT_TOL: f64 = 1e-15;

/// Gram matrix of 1, z, …, z^k in L²(w dm), entries ∫ z̄^i z^j w dm.
pub fn monomial_gram(w: &Profile, k: u32, prec: u32) -> Result<Vec<Vec<BigComplex>>> {
    let n = k as usize + 1;
    let mut g = vec![vec![BigComplex::zero(prec); n]; n];
    match w {
        Profile::Step(s) => {
            check_step(s)?;
            for j in 0..n {
                g[j][j] = BigComplex::real(step_moment(s, j as u32, prec));
            }
        }
        Profile::Smooth(s) => {
            for j in 0..n {
                g[j][j] = BigComplex::real(Float::with_val(prec, smooth_moment(s, j as u32)?));
            }
        }
        Profile::Grid(grid) => {
            let m = grid_moments(grid, n)?;
            for i in 0..n {
                for j in 0..n {
                    g[i][j] = BigComplex::new(Float::with_val(prec, m[i][j].0), Float::with_val(prec, m[i][j].1));
                }
            }
        }
    }
    Ok(g)
}

fn check_step(s: &RadialStep) -> Result<()> {
    if s.annuli().iter().any(|a| a.value < 0.0) {
        return Err(Error::invalid("weight must be nonnegative"));
    }
    Ok(())
}

/// ∫ |z|^{2j} w dm = Σ c π (r₂^{2j+2} − r₁^{2j+2}) / (j+1).
fn step_moment(s: &RadialStep, j: u32, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    for a in s.annuli() {
        let hi = powu(&Float::with_val(prec, a.r_hi), 2 * j + 2);
        let lo = powu(&Float::with_val(prec, a.r_lo), 2 * j + 2);
        acc += Float::with_val(prec, hi - lo) * a.value;
    }
    acc * pi(prec) / (j + 1)
}

fn smooth_moment(s: &SmoothRadial, j: u32) -> Result<f64> {
    let mut cuts = vec![0.0];
    cuts.extend(s.breakpoints());
    let r_max = s.support_radius();
    cuts.retain(|&r| r < r_max);
    cuts.push(r_max);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let scale = w[1].powi(2 * j as i32 + 2);
        let (v, _) = quad::adaptive(w[0], w[1], MOMENT_TOL * scale.max(f64::MIN_POSITIVE), 1 << 16, |r| {
            let v = s.value(r);
            r.powi(2 * j as i32 + 1) * v
        })?;
        total += v;
    }
    if s.sample_radii(2001).iter().any(|&r| s.value(r) < 0.0) {
        return Err(Error::invalid("weight must be nonnegative"));
    }
    Ok(2.0 * std::f64::consts::PI * total)
}

fn grid_moments(g: &Grid2D, n: usize) -> Result<Vec<Vec<(f64, f64)>>> {
    if g.values.iter().any(|&v| v < 0.0) {
        return Err(Error::invalid("weight must be nonnegative"));
    }
    let mut m = vec![vec![(0.0, 0.0); n]; n];
    let cell = g.dx * g.dy;
    for y in 0..g.ny {
        for x in 0..g.nx {
            let w = g.node(x, y);
            if w == 0.0 {
                continue;
            }
            let (px, py) = g.node_position(x, y);
            let z = num_complex::Complex64::new(px, py);
            let mut pows = Vec::with_capacity(n);
            let mut p = num_complex::Complex64::new(1.0, 0.0);
            for _ in 0..n {
                pows.push(p);
                p *= z;
            }
            for i in 0..n {
                for j in 0..n {
                    let v = pows[i].conj() * pows[j] * (w * cell);
                    m[i][j].0 += v.re;
                    m[i][j].1 += v.im;
                }
            }
        }
    }
    Ok(m)
}

/// M_0, …, M_k as successive Gram determinant ratios, i.e. the LDLᴴ pivots.
pub fn monic_l2_sequence(w: &Profile, k: u32, prec: u32) -> Result<Vec<Float>> {
    let g = monomial_gram(w, k, prec)?;
    let n = g.len();
    // exact moments tolerate pivots down to the working precision; sampled ones to f64
    let rel = match w {
        Profile::Step(_) => (2.0f64).powi(8 - prec as i32),
        _ => 1e-12,
    };
    let mut l = vec![vec![BigComplex::zero(prec); n]; n];
    let mut d: Vec<Float> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = g[j][j].re.clone();
        for t in 0..j {
            dj -= Float::with_val(prec, l[j][t].norm_sqr() * &d[t]);
        }
        if dj <= Float::with_val(prec, &g[j][j].re * rel) {
            return Err(Error::SingularGram { order: j });
        }
        for i in j + 1..n {
            let mut s = g[i][j].clone();
            for t in 0..j {
                let lt = l[j][t].conj_mul(&l[i][t]);
                s.sub_assign_ref(&lt.scale(&d[t]));
            }
            let inv = Float::with_val(prec, 1 / &dj);
            l[i][j] = s.scale(&inv);
        }
        d.push(dj);
    }
    Ok(d)
}

/// M_k(w) = inf over monic p of degree k of ∫ |p|² w dm.
pub fn monic_l2_minimum(w: &Profile, k: u32, prec: u32) -> Result<Float> {
    Ok(monic_l2_sequence(w, k, prec)?.pop().expect("k + 1 pivots"))
}

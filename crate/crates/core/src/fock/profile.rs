//! Scalar and complex potential profiles.

use num_complex::Complex64;

use super::radial::SmoothRadial;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub r_lo: f64,
    pub r_hi: f64,
    pub value: f64,
}

/// Piecewise constant radial profile; annuli are disjoint and sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialStep {
    annuli: Vec<Annulus>,
}

impl RadialStep {
    /// Builds the profile Σ value·χ_{r_lo ≤ r < r_hi}; overlapping annuli add up.
    pub fn new(pieces: Vec<(f64, f64, f64)>) -> Result<Self> {
        for &(lo, hi, v) in &pieces {
            if !(lo >= 0.0 && lo < hi && hi.is_finite() && v.is_finite()) {
                return Err(Error::invalid(format!(
                    "annulus ({lo}, {hi}, {v}) needs 0 <= r_lo < r_hi < inf and a finite value"
                )));
            }
        }
        let mut cuts: Vec<f64> = pieces.iter().flat_map(|&(lo, hi, _)| [lo, hi]).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut annuli: Vec<Annulus> = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let value: f64 = pieces.iter().filter(|p| p.0 <= lo && hi <= p.1).map(|p| p.2).sum();
            if value == 0.0 {
                continue;
            }
            match annuli.last_mut() {
                Some(last) if last.r_hi == lo && last.value == value => last.r_hi = hi,
                _ => annuli.push(Annulus { r_lo: lo, r_hi: hi, value }),
            }
        }
        Ok(RadialStep { annuli })
    }

    /// value·χ_{|z| ≤ r}; empty for r = 0.
    pub fn disk(r: f64, value: f64) -> Result<Self> {
        if r == 0.0 {
            return Ok(RadialStep { annuli: Vec::new() });
        }
        RadialStep::new(vec![(0.0, r, value)])
    }

    pub fn zero() -> Self {
        RadialStep { annuli: Vec::new() }
    }

    pub fn annuli(&self) -> &[Annulus] {
        &self.annuli
    }

    pub fn value(&self, r: f64) -> f64 {
        self.annuli.iter().find(|a| a.r_lo <= r && r < a.r_hi).map_or(0.0, |a| a.value)
    }

    pub fn support_radius(&self) -> f64 {
        self.annuli.last().map_or(0.0, |a| a.r_hi)
    }

    pub fn scaled(&self, c: f64) -> RadialStep {
        self.map_values(|v| c * v)
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> RadialStep {
        let pieces = self.annuli.iter().map(|a| (a.r_lo, a.r_hi, f(a.value))).collect();
        RadialStep::new(pieces).expect("annuli already validated")
    }
}

/// Samples on a rectangular lattice, bilinearly interpolated and zero outside.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2D {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major: values[j * nx + i] at (x0 + i dx, y0 + j dy).
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn new(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 || values.len() != nx * ny {
            return Err(Error::invalid("grid needs nx, ny >= 2 and nx*ny values"));
        }
        if !(dx > 0.0 && dy > 0.0) || !values.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("grid spacing must be positive and values finite"));
        }
        Ok(Grid2D { x0, y0, dx, dy, nx, ny, values })
    }

    /// Samples f on the lattice.
    pub fn sample(
        x0: f64,
        y0: f64,
        dx: f64,
        dy: f64,
        nx: usize,
        ny: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f(x0 + i as f64 * dx, y0 + j as f64 * dy));
            }
        }
        Grid2D::new(x0, y0, dx, dy, nx, ny, values)
    }

    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn node_position(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy)
    }

    /// [x_min, x_max, y_min, y_max].
    pub fn bounding_box(&self) -> [f64; 4] {
        [
            self.x0,
            self.x0 + (self.nx - 1) as f64 * self.dx,
            self.y0,
            self.y0 + (self.ny - 1) as f64 * self.dy,
        ]
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        let u = (x - self.x0) / self.dx;
        let v = (y - self.y0) / self.dy;
        if u < 0.0 || v < 0.0 || u > (self.nx - 1) as f64 || v > (self.ny - 1) as f64 {
            return 0.0;
        }
        let i = (u.floor() as usize).min(self.nx - 2);
        let j = (v.floor() as usize).min(self.ny - 2);
        let fu = u - i as f64;
        let fv = v - j as f64;
        let a = self.node(i, j) * (1.0 - fu) + self.node(i + 1, j) * fu;
        let b = self.node(i, j + 1) * (1.0 - fu) + self.node(i + 1, j + 1) * fu;
        a * (1.0 - fv) + b * fv
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Grid2D {
        Grid2D { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    fn node_or_zero(&self, i: isize, j: isize) -> f64 {
        if i < 0 || j < 0 || i >= self.nx as isize || j >= self.ny as isize {
            0.0
        } else {
            self.node(i as usize, j as usize)
        }
    }

    fn stencil(&self, i: usize, j: usize, s: isize) -> f64 {
        let (i, j) = (i as isize, j as isize);
        let hx = self.dx * s as f64;
        let hy = self.dy * s as f64;
        let c = self.node_or_zero(i, j);
        (self.node_or_zero(i + s, j) - 2.0 * c + self.node_or_zero(i - s, j)) / (hx * hx)
            + (self.node_or_zero(i, j + s) - 2.0 * c + self.node_or_zero(i, j - s)) / (hy * hy)
    }

    /// Five-point Laplacian at steps h and 2h combined by Richardson
    /// extrapolation; returns the grid and the largest |Δ_h − Δ_2h|/3.
    pub fn laplacian(&self) -> (Grid2D, f64) {
        let mut out = Vec::with_capacity(self.values.len());
        let mut err: f64 = 0.0;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let l1 = self.stencil(i, j, 1);
                let l2 = self.stencil(i, j, 2);
                err = err.max((l1 - l2).abs() / 3.0);
                out.push((4.0 * l1 - l2) / 3.0);
            }
        }
        (Grid2D { values: out, ..self.clone() }, err)
    }
}

/// Real scalar potential profile.
#[derive(Clone, Debug)]
pub enum Profile {
    Step(RadialStep),
    Smooth(SmoothRadial),
    Grid(Grid2D),
}

impl Profile {
    pub fn zero() -> Profile {
        Profile::Step(RadialStep::zero())
    }

    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        match self {
            Profile::Step(s) => s.value(x1.hypot(x2)),
            Profile::Smooth(s) => s.value(x1.hypot(x2)),
            Profile::Grid(g) => g.value(x1, x2),
        }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self, Profile::Grid(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Step(s) => s.annuli().is_empty(),
            Profile::Smooth(_) => false,
            Profile::Grid(g) => g.values.iter().all(|&v| v == 0.0),
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self {
            Profile::Step(s) => s.support_radius(),
            Profile::Smooth(s) => s.support_radius(),
            Profile::Grid(g) => {
                let [a, b, c, d] = g.bounding_box();
                a.abs().max(b.abs()).hypot(c.abs().max(d.abs()))
            }
        }
    }

    pub fn bounding_box(&self) -> [f64; 4] {
        match self {
            Profile::Grid(g) => g.bounding_box(),
            _ => {
                let r = self.support_radius();
                [-r, r, -r, r]
            }
        }
    }

    pub fn scaled(&self, c: f64) -> Profile {
        match self {
            Profile::Step(s) => Profile::Step(s.scaled(c)),
            Profile::Smooth(s) => Profile::Smooth(s.scaled(c)),
            Profile::Grid(g) => Profile::Grid(g.map_values(|v| c * v)),
        }
    }

    /// (v − ε|v|, v + ε|v|).
    pub fn bracket(&self, eps: f64) -> (Profile, Profile) {
        match self {
            Profile::Step(s) => (
                Profile::Step(s.map_values(|v| v - eps * v.abs())),
                Profile::Step(s.map_values(|v| v + eps * v.abs())),
            ),
            Profile::Grid(g) => (
                Profile::Grid(g.map_values(|v| v - eps * v.abs())),
                Profile::Grid(g.map_values(|v| v + eps * v.abs())),
            ),
            Profile::Smooth(s) => {
                let samples: Vec<f64> = s.sample_radii(2001).into_iter().map(|r| s.value(r)).collect();
                if samples.iter().all(|&v| v >= 0.0) {
                    (Profile::Smooth(s.scaled(1.0 - eps)), Profile::Smooth(s.scaled(1.0 + eps)))
                } else if samples.iter().all(|&v| v <= 0.0) {
                    (Profile::Smooth(s.scaled(1.0 + eps)), Profile::Smooth(s.scaled(1.0 - eps)))
                } else {
                    let a = s.abs();
                    let with = |sign: f64| {
                        SmoothRadial::combination(vec![(1.0, 0, s.clone()), (sign * eps, 0, a.clone())])
                            .expect("support unchanged")
                    };
                    (Profile::Smooth(with(-1.0)), Profile::Smooth(with(1.0)))
                }
            }
        }
    }
}

/// Off-diagonal entry W of the matrix potential.
#[derive(Clone, Debug)]
pub enum WProfile {
    /// Re W = c[0] + grad[0]·x, Im W = c[1] + grad[1]·x.
    Affine { c: [f64; 2], grad: [[f64; 2]; 2] },
    /// W = −i h(r) z = h(r)(x2 − i x1).
    RadialGauge { h: SmoothRadial },
    /// Sampled real and imaginary parts, without derivative information.
    Grid { re: Grid2D, im: Grid2D },
}

impl WProfile {
    pub fn value(&self, x1: f64, x2: f64) -> Complex64 {
        match self {
            WProfile::Affine { c, grad } => Complex64::new(
                c[0] + grad[0][0] * x1 + grad[0][1] * x2,
                c[1] + grad[1][0] * x1 + grad[1][1] * x2,
            ),
            WProfile::RadialGauge { h } => {
                let hv = h.value(x1.hypot(x2));
                Complex64::new(hv * x2, -hv * x1)
            }
            WProfile::Grid { re, im } => Complex64::new(re.value(x1, x2), im.value(x1, x2)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PotentialSpec {
    pub v1: Profile,
    pub v2: Profile,
    pub w: Option<WProfile>,
}

impl PotentialSpec {
    pub fn diagonal(v1: Profile, v2: Profile) -> Self {
        PotentialSpec { v1, v2, w: None }
    }

    pub fn zero() -> Self {
        PotentialSpec::diagonal(Profile::zero(), Profile::zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.w.is_none()
    }

    pub fn is_radial_diagonal(&self) -> bool {
        self.is_diagonal() && self.v1.is_radial() && self.v2.is_radial()
    }

    pub fn scaled(&self, c: f64) -> Result<PotentialSpec> {
        if self.w.is_some() {
            return Err(Error::unsupported("scaling of non-diagonal potentials"));
        }
        Ok(PotentialSpec::diagonal(self.v1.scaled(c), self.v2.scaled(c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_annuli_add() {
        let s = RadialStep::new(vec![(0.0, 2.0, 1.0), (1.0, 3.0, 2.0)]).unwrap();
        assert_eq!(s.annuli().len(), 3);
        assert_eq!(s.value(0.5), 1.0);
        assert_eq!(s.value(1.5), 3.0);
        assert_eq!(s.value(2.5), 2.0);
        assert_eq!(s.value(3.5), 0.0);
    }

    #[test]
    fn step_rejects_bad_annulus() {
        assert!(RadialStep::new(vec![(1.0, 0.5, 1.0)]).is_err());
        assert!(RadialStep::new(vec![(0.0, f64::INFINITY, 1.0)]).is_err());
    }

    #[test]
    fn bracket_examples() {
        let v = Profile::Step(RadialStep::disk(1.0, 2.0).unwrap());
        let (lo, hi) = v.bracket(0.1);
        assert!((lo.value(0.1, 0.0) - 1.8).abs() < 1e-15);
        assert!((hi.value(0.1, 0.0) - 2.2).abs() < 1e-15);
        let v = Profile::Step(RadialStep::disk(1.0, -1.0).unwrap());
        let (lo, hi) = v.bracket(0.1);
        assert!((lo.value(0.1, 0.0) + 1.1).abs() < 1e-15);
        assert!((hi.value(0.1, 0.0) + 0.9).abs() < 1e-15);
        let mixed = Profile::Step(RadialStep::new(vec![(0.0, 1.0, 1.0), (1.0, 2.0, -1.0)]).unwrap());
        let (lo, hi) = mixed.bracket(0.5);
        assert_eq!(lo.value(0.5, 0.0), 0.5);
        assert_eq!(lo.value(1.5, 0.0), -1.5);
        assert_eq!(hi.value(0.5, 0.0), 1.5);
        assert_eq!(hi.value(1.5, 0.0), -0.5);
    }

    #[test]
    fn grid_laplacian_of_quadratic() {
        let g = Grid2D::sample(-1.0, -1.0, 0.05, 0.05, 41, 41, |x, y| x * x + y * y).unwrap();
        let (l, _) = g.laplacian();
        assert!((l.node(20, 20) - 4.0).abs() < 1e-9);
        assert!((g.value(0.3, -0.2) - 0.13).abs() < 3e-3);
        assert_eq!(g.value(2.0, 0.0), 0.0);
    }
}

//! Bounded planar regions given as closed sets, with boundary curves used
//! for point optimization and rasterization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Relative tolerance for closed membership tests.
const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disk {
        #[serde(default)]
        center: [f64; 2],
        #[serde(alias = "r")]
        radius: f64,
    },
    Segment { a: [f64; 2], b: [f64; 2] },
    /// Simple polygon, vertices in order.
    Polygon { vertices: Vec<[f64; 2]> },
    Annulus {
        #[serde(default)]
        center: [f64; 2],
        inner: f64,
        outer: f64,
    },
    Union { parts: Vec<Region> },
    /// Closure of base ∖ minus.
    Difference { base: Box<Region>, minus: Box<Region> },
}

/// A boundary curve parametrized by arclength.
#[derive(Clone, Debug)]
pub enum Curve {
    Circle { center: Complex64, radius: f64 },
    Polyline { points: Vec<Complex64>, closed: bool, cumulative: Vec<f64> },
}

fn c(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl Curve {
    fn polyline(points: Vec<Complex64>, closed: bool) -> Curve {
        let mut cumulative = vec![0.0];
        let m = if closed { points.len() } else { points.len() - 1 };
        for i in 0..m {
            let d = (points[(i + 1) % points.len()] - points[i]).norm();
            cumulative.push(cumulative[i] + d);
        }
        Curve::Polyline { points, closed, cumulative }
    }

    pub fn length(&self) -> f64 {
        match self {
            Curve::Circle { radius, .. } => TAU * radius,
            Curve::Polyline { cumulative, .. } => *cumulative.last().unwrap(),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Curve::Circle { .. } => true,
            Curve::Polyline { closed, .. } => *closed,
        }
    }

    /// Point at arclength s; closed curves wrap, open ones clamp.
    pub fn point(&self, s: f64) -> Complex64 {
        let len = self.length();
        let s = if self.is_closed() { s.rem_euclid(len) } else { s.clamp(0.0, len) };
        match self {
            Curve::Circle { center, radius } => center + Complex64::from_polar(*radius, s / radius),
            Curve::Polyline { points, cumulative, .. } => {
                let i = match cumulative.binary_search_by(|x| x.total_cmp(&s)) {
                    Ok(i) => i.min(cumulative.len() - 2),
                    Err(i) => i.saturating_sub(1).min(cumulative.len() - 2),
                };
                let seg = cumulative[i + 1] - cumulative[i];
                let f = if seg > 0.0 { (s - cumulative[i]) / seg } else { 0.0 };
                let a = points[i];
                let b = points[(i + 1) % points.len()];
                a + (b - a) * f
            }
        }
    }

    pub fn clamp(&self, s: f64) -> f64 {
        if self.is_closed() {
            s.rem_euclid(self.length())
        } else {
            s.clamp(0.0, self.length())
        }
    }
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / l2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

fn polygon_inside(z: Complex64, v: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if (a[1] > z.im) != (b[1] > z.im) {
            let x = a[0] + (z.im - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if z.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn polygon_edge_distance(z: Complex64, v: &[[f64; 2]]) -> f64 {
    (0..v.len()).map(|i| segment_distance(z, c(v[i]), c(v[(i + 1) % v.len()]))).fold(f64::INFINITY, f64::min)
}

impl Region {
    pub fn disk(radius: f64) -> Region {
        Region::Disk { center: [0.0, 0.0], radius }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |p: &[f64; 2]| p[0].is_finite() && p[1].is_finite();
        match self {
            Region::Disk { center, radius } => {
                if !finite(center) || !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::invalid("disk needs a finite center and radius > 0"));
                }
            }
            Region::Segment { a, b } => {
                if !finite(a) || !finite(b) || a == b {
                    return Err(Error::invalid("segment needs two distinct finite endpoints"));
                }
            }
            Region::Polygon { vertices } => {
                if vertices.len() < 3 || !vertices.iter().all(finite) {
                    return Err(Error::invalid("polygon needs at least 3 finite vertices"));
                }
                let area: f64 = (0..vertices.len())
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
                        a[0] * b[1] - a[1] * b[0]
                    })
                    .sum();
                if area.abs() <= 0.0 {
                    return Err(Error::invalid("polygon has zero area"));
                }
            }
            Region::Annulus { center, inner, outer } => {
                if !finite(center) || !(*inner >= 0.0 && inner < outer && outer.is_finite()) {
                    return Err(Error::invalid("annulus needs 0 ≤ inner < outer < ∞"));
                }
            }
            Region::Union { parts } => {
                if parts.is_empty() {
                    return Err(Error::invalid("union needs at least one part"));
                }
                for p in parts {
                    p.validate()?;
                }
            }
            Region::Difference { base, minus } => {
                base.validate()?;
                minus.validate()?;
            }
        }
        Ok(())
    }

    fn scale_hint(&self) -> f64 {
        let [x0, x1, y0, y1] = self.bounding_box();
        (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE)
    }

    /// Membership in the closed set, with a small relative tolerance.
    pub fn contains(&self, z: Complex64) -> bool {
        self.contains_tol(z, MEMBERSHIP_TOL * self.scale_hint())
    }

    fn contains_tol(&self, z: Complex64, tol: f64) -> bool {
        match self {
            Region::Disk { center, radius } => (z - c(*center)).norm() <= radius + tol,
            Region::Segment { a, b } => segment_distance(z, c(*a), c(*b)) <= tol,
            Region::Polygon { vertices } => polygon_inside(z, vertices) || polygon_edge_distance(z, vertices) <= tol,
            Region::Annulus { center, inner, outer } => {
                let r = (z - c(*center)).norm();
                r >= inner - tol && r <= outer + tol
            }
            Region::Union { parts } => parts.iter().any(|p| p.contains_tol(z, tol)),
            Region::Difference { base, minus } => base.contains_tol(z, tol) && !minus.interior_tol(z, tol),
        }
    }

    /// Membership in the interior.
    pub fn interior_contains(&self, z: Complex64) -> bool {
        self.interior_tol(z, MEMBERSHIP_TOL * self.scale_hint())
    }

    fn interior_tol(&self, z: Complex64, tol: f64) -> bool {
        match self {
            Region::Disk { center, radius } => (z - c(*center)).norm() < radius - tol,
            Region::Segment { .. } => false,
            Region::Polygon { vertices } => polygon_inside(z, vertices) && polygon_edge_distance(z, vertices) > tol,
            Region::Annulus { center, inner, outer } => {
                let r = (z - c(*center)).norm();
                r > inner + tol && r < outer - tol
            }
            Region::Union { parts } => parts.iter().any(|p| p.interior_tol(z, tol)),
            Region::Difference { base, minus } => base.interior_tol(z, tol) && !minus.contains_tol(z, tol),
        }
    }

    /// [x_min, x_max, y_min, y_max].
    pub fn bounding_box(&self) -> [f64; 4] {
        match self {
            Region::Disk { center, radius } | Region::Annulus { center, outer: radius, .. } => {
                [center[0] - radius, center[0] + radius, center[1] - radius, center[1] + radius]
            }
            Region::Segment { a, b } => [a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1])],
            Region::Polygon { vertices } => vertices.iter().fold(
                [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY],
                |b, v| [b[0].min(v[0]), b[1].max(v[0]), b[2].min(v[1]), b[3].max(v[1])],
            ),
            Region::Union { parts } => parts.iter().map(|p| p.bounding_box()).fold(
                [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY],
                |b, v| [b[0].min(v[0]), b[1].max(v[1]), b[2].min(v[2]), b[3].max(v[3])],
            ),
            Region::Difference { base, .. } => base.bounding_box(),
        }
    }

    pub fn centroid_hint(&self) -> Complex64 {
        let [x0, x1, y0, y1] = self.bounding_box();
        Complex64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1))
    }

    /// Curves containing the topological boundary (possibly more).
    pub fn boundary_curves(&self) -> Vec<Curve> {
        match self {
            Region::Disk { center, radius } => vec![Curve::Circle { center: c(*center), radius: *radius }],
            Region::Segment { a, b } => vec![Curve::polyline(vec![c(*a), c(*b)], false)],
            Region::Polygon { vertices } => vec![Curve::polyline(vertices.iter().copied().map(c).collect(), true)],
            Region::Annulus { center, inner, outer } => {
                let mut v = vec![Curve::Circle { center: c(*center), radius: *outer }];
                if *inner > 0.0 {
                    v.push(Curve::Circle { center: c(*center), radius: *inner });
                }
                v
            }
            Region::Union { parts } => parts.iter().flat_map(|p| p.boundary_curves()).collect(),
            Region::Difference { base, minus } => {
                let mut v = base.boundary_curves();
                v.extend(minus.boundary_curves());
                v
            }
        }
    }

    /// About n points of the boundary curves lying in the closed set, spaced by arclength.
    pub fn boundary_samples(&self, n: usize) -> Vec<Complex64> {
        let curves = self.boundary_curves();
        let total: f64 = curves.iter().map(Curve::length).sum();
        let mut out = Vec::with_capacity(n);
        for cv in &curves {
            let m = ((n as f64 * cv.length() / total).ceil() as usize).max(2);
            let denom = if cv.is_closed() { m } else { m - 1 };
            for i in 0..m {
                let z = cv.point(cv.length() * i as f64 / denom as f64);
                if self.contains(z) {
                    out.push(z);
                }
            }
        }
        out
    }

    /// sE about the origin.
    pub fn scaled(&self, s: f64) -> Region {
        let m = |p: &[f64; 2]| [p[0] * s, p[1] * s];
        match self {
            Region::Disk { center, radius } => Region::Disk { center: m(center), radius: radius * s },
            Region::Segment { a, b } => Region::Segment { a: m(a), b: m(b) },
            Region::Polygon { vertices } => Region::Polygon { vertices: vertices.iter().map(m).collect() },
            Region::Annulus { center, inner, outer } => {
                Region::Annulus { center: m(center), inner: inner * s, outer: outer * s }
            }
            Region::Union { parts } => Region::Union { parts: parts.iter().map(|p| p.scaled(s)).collect() },
            Region::Difference { base, minus } => {
                Region::Difference { base: Box::new(base.scaled(s)), minus: Box::new(minus.scaled(s)) }
            }
        }
    }
}

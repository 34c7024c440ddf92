//! Closed-form smooth radial profiles with exact derivative jets.

use std::fmt;
use std::sync::Arc;

use super::jet::Jet;
use super::profile::RadialStep;
use crate::error::{Error, Result};
use crate::quad;

/// Cutoff function of the bump construction: h(s) = exp(1/(s(s−2))) on (0, 2), zero elsewhere.
pub fn bump_h(s: f64) -> f64 {
    if s <= 0.0 || s >= 2.0 {
        0.0
    } else {
        (1.0 / (s * (s - 2.0))).exp()
    }
}

/// h′(s) = h(s)·(2 − 2s)/(s²(s−2)²).
pub fn bump_h_prime(s: f64) -> f64 {
    if s <= 0.0 || s >= 2.0 {
        0.0
    } else {
        let d = s * (s - 2.0);
        bump_h(s) * (2.0 - 2.0 * s) / (d * d)
    }
}

const TABLE_NODES: usize = 4096;

/// g(s) = ∫_s^2 h, tabulated at equispaced nodes and refined by one panel on demand.
pub struct AppendixProfile {
    pub delta: f64,
    table: Vec<f64>,
}

impl fmt::Debug for AppendixProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AppendixProfile").field("delta", &self.delta).finish()
    }
}

impl AppendixProfile {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::invalid(format!("bump scaling must be > 0, got {delta}")));
        }
        let step = 2.0 / TABLE_NODES as f64;
        let mut table = vec![0.0; TABLE_NODES + 1];
        for i in (0..TABLE_NODES).rev() {
            let a = i as f64 * step;
            table[i] = table[i + 1] + quad::panel(a, a + step, bump_h);
        }
        Ok(AppendixProfile { delta, table })
    }

    pub fn g(&self, s: f64) -> f64 {
        if s >= 2.0 {
            return 0.0;
        }
        let s = s.max(0.0);
        let step = 2.0 / TABLE_NODES as f64;
        let i = ((s / step) as usize).min(TABLE_NODES - 1);
        let hi = (i + 1) as f64 * step;
        self.table[i + 1] + quad::panel(s, hi, bump_h)
    }

    pub fn g_prime(&self, s: f64) -> f64 {
        -bump_h(s)
    }

    pub fn g_second(&self, s: f64) -> f64 {
        -bump_h_prime(s)
    }

    /// Jet of g in s at s0.
    fn jet_s(&self, s0: f64, order: usize) -> Jet {
        if s0 >= 2.0 {
            return Jet::zero(order);
        }
        let g0 = self.g(s0);
        if order == 0 {
            return Jet::constant(g0, 0);
        }
        if s0 <= 0.0 || bump_h(s0) == 0.0 {
            return Jet::constant(g0, order);
        }
        let x = Jet::variable(s0, order - 1);
        let p = x.mul(&x.sub(&Jet::constant(2.0, order - 1)));
        let h = p.recip().exp();
        h.scale(-1.0).integral(g0)
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coef: f64,
    /// Power of the Laplacian applied to `expr`.
    pub laplacian: u32,
    pub expr: RadialExpr,
}

#[derive(Clone, Debug)]
pub enum RadialExpr {
    /// amplitude·(1 − r²/R²)^power for r < R, zero outside; C^{power−1}.
    PolyBump { amplitude: f64, radius: f64, power: u32 },
    /// amplitude·g(δ r).
    Appendix { amplitude: f64, profile: Arc<AppendixProfile> },
    Sum(Vec<Term>),
    /// Piecewise constant; no derivatives.
    Step(RadialStep),
    /// Pointwise absolute value; only continuous.
    Abs(Box<RadialExpr>),
    /// 2h + r h′, the magnetic amplitude of the gauge field W = −i h(r) z.
    GaugeField(Box<RadialExpr>),
}

impl RadialExpr {
    fn jet(&self, r0: f64, order: usize) -> Result<Jet> {
        match self {
            RadialExpr::PolyBump { amplitude, radius, power } => {
                if r0 >= *radius {
                    return Ok(Jet::zero(order));
                }
                let x = Jet::variable(r0, order);
                let w = Jet::constant(1.0, order).sub(&x.mul(&x).scale(1.0 / (radius * radius)));
                Ok(w.powi(*power).scale(*amplitude))
            }
            RadialExpr::Appendix { amplitude, profile } => {
                let d = profile.delta;
                Ok(profile.jet_s(d * r0, order).rescale(d).scale(*amplitude))
            }
            RadialExpr::Sum(terms) => {
                let mut acc = Jet::zero(order);
                for t in terms {
                    let mut j = t.expr.jet(r0, order + 2 * t.laplacian as usize)?;
                    for _ in 0..t.laplacian {
                        j = j.radial_laplacian(r0);
                    }
                    acc = acc.add(&j.scale(t.coef));
                }
                Ok(acc)
            }
            RadialExpr::Step(st) => {
                if order > 0 {
                    return Err(Error::InsufficientSmoothness { needed: order as u32, available: 0 });
                }
                Ok(Jet::constant(st.value(r0), 0))
            }
            RadialExpr::Abs(inner) => {
                if order > 0 {
                    return Err(Error::InsufficientSmoothness { needed: order as u32, available: 0 });
                }
                Ok(Jet::constant(inner.jet(r0, 0)?.value().abs(), 0))
            }
            RadialExpr::GaugeField(h) => {
                let hj = h.jet(r0, order + 1)?;
                let rh = Jet::variable(r0, order).mul(&hj.derivative());
                Ok(hj.truncate(order).scale(2.0).add(&rh))
            }
        }
    }

    fn smoothness(&self) -> Option<u32> {
        match self {
            RadialExpr::PolyBump { power, .. } => Some(power.saturating_sub(1)),
            RadialExpr::Appendix { .. } => None,
            RadialExpr::Sum(terms) => terms
                .iter()
                .filter_map(|t| t.expr.smoothness().map(|s| s.saturating_sub(2 * t.laplacian)))
                .min(),
            RadialExpr::Abs(_) | RadialExpr::Step(_) => Some(0),
            RadialExpr::GaugeField(h) => h.smoothness().map(|s| s.saturating_sub(1)),
        }
    }

    fn breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            RadialExpr::PolyBump { radius, .. } => out.push(*radius),
            RadialExpr::Appendix { profile, .. } => out.push(2.0 / profile.delta),
            RadialExpr::Sum(terms) => terms.iter().for_each(|t| t.expr.breakpoints(out)),
            RadialExpr::GaugeField(e) => e.breakpoints(out),
            RadialExpr::Step(st) => out.extend(st.annuli().iter().flat_map(|a| [a.r_lo, a.r_hi])),
            RadialExpr::Abs(e) => {
                e.breakpoints(out);
                let value = |r: f64| e.jet(r, 0).map(|j| j.value()).unwrap_or(0.0);
                let rmax = e.support_radius();
                let n = 4096;
                let mut prev = (0.0, value(0.0));
                for i in 1..=n {
                    let r = rmax * i as f64 / n as f64;
                    let v = value(r);
                    if prev.1 * v < 0.0 {
                        let (mut lo, mut hi) = (prev.0, r);
                        for _ in 0..60 {
                            let mid = 0.5 * (lo + hi);
                            if value(mid) * prev.1 > 0.0 {
                                lo = mid;
                            } else {
                                hi = mid;
                            }
                        }
                        out.push(0.5 * (lo + hi));
                    }
                    prev = (r, v);
                }
            }
        }
    }

    fn support_radius(&self) -> f64 {
        match self {
            RadialExpr::PolyBump { radius, .. } => *radius,
            RadialExpr::Appendix { profile, .. } => 2.0 / profile.delta,
            RadialExpr::Sum(terms) => terms.iter().map(|t| t.expr.support_radius()).fold(0.0, f64::max),
            RadialExpr::Step(st) => st.support_radius(),
            RadialExpr::Abs(e) | RadialExpr::GaugeField(e) => e.support_radius(),
        }
    }
}

/// Radial profile f(|x|) given in closed form, with exact Laplacian oracles.
#[derive(Clone, Debug)]
pub struct SmoothRadial {
    expr: Arc<RadialExpr>,
}

impl SmoothRadial {
    pub fn from_expr(expr: RadialExpr) -> Result<Self> {
        let s = SmoothRadial { expr: Arc::new(expr) };
        let r = s.support_radius();
        if !r.is_finite() || r < 0.0 {
            return Err(Error::invalid("smooth profile must have bounded support"));
        }
        Ok(s)
    }

    pub fn poly_bump(amplitude: f64, radius: f64, power: u32) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || power == 0 || !amplitude.is_finite() {
            return Err(Error::invalid("polynomial bump needs radius > 0, power >= 1, finite amplitude"));
        }
        SmoothRadial::from_expr(RadialExpr::PolyBump { amplitude, radius, power })
    }

    pub fn appendix(profile: Arc<AppendixProfile>, amplitude: f64) -> Result<Self> {
        SmoothRadial::from_expr(RadialExpr::Appendix { amplitude, profile })
    }

    /// A step profile viewed as a (non-smooth) closed-form profile.
    pub fn from_step(step: &RadialStep) -> SmoothRadial {
        SmoothRadial { expr: Arc::new(RadialExpr::Step(step.clone())) }
    }

    pub fn expr(&self) -> &RadialExpr {
        &self.expr
    }

    /// Σ coef·Δ^laplacian(profile).
    pub fn combination(terms: Vec<(f64, u32, SmoothRadial)>) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(coef, laplacian, p)| Term { coef, laplacian, expr: (*p.expr).clone() })
            .collect();
        SmoothRadial::from_expr(RadialExpr::Sum(terms))
    }

    pub fn scaled(&self, c: f64) -> SmoothRadial {
        SmoothRadial::combination(vec![(c, 0, self.clone())]).expect("support unchanged")
    }

    pub fn abs(&self) -> SmoothRadial {
        SmoothRadial { expr: Arc::new(RadialExpr::Abs(Box::new((*self.expr).clone()))) }
    }

    /// Magnetic amplitude 2h + r h′ of the gauge field W = −i h(r) z built from this profile.
    pub fn gauge_field(&self) -> SmoothRadial {
        SmoothRadial { expr: Arc::new(RadialExpr::GaugeField(Box::new((*self.expr).clone()))) }
    }

    /// Number of continuous derivatives; `None` means infinitely smooth.
    pub fn smoothness(&self) -> Option<u32> {
        self.expr.smoothness()
    }

    pub fn require_smoothness(&self, needed: u32) -> Result<()> {
        match self.smoothness() {
            Some(s) if s < needed => Err(Error::InsufficientSmoothness { needed, available: s }),
            _ => Ok(()),
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.expr.support_radius()
    }

    /// Radii where the profile may fail to be smooth (support edges, kinks), sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.expr.breakpoints(&mut out);
        out.retain(|r| r.is_finite() && *r > 0.0);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
        out
    }

    pub fn jet(&self, r: f64, order: usize) -> Result<Jet> {
        self.expr.jet(r.abs(), order)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.expr.jet(r.abs(), 0).map(|j| j.value()).unwrap_or(f64::NAN)
    }

    /// Δ^j f at radius r.
    pub fn laplacian(&self, j: u32, r: f64) -> Result<f64> {
        let r = r.abs();
        let mut jet = self.expr.jet(r, 2 * j as usize)?;
        for _ in 0..j {
            jet = jet.radial_laplacian(r);
        }
        Ok(jet.value())
    }

    /// Equispaced radii covering the support, endpoints included.
    pub fn sample_radii(&self, n: usize) -> Vec<f64> {
        let r = self.support_radius();
        (0..n).map(|i| r * i as f64 / (n - 1) as f64).collect()
    }
}

//! Effective scalar symbols v_q(V) and the lower-component constructions
//! that suppress or cancel the first level's symbol.

use crate::error::{Error, Result};
use crate::fock::{landau_dirac_level_f64, Grid2D, MagneticParams, PotentialSpec, Profile, SmoothRadial, WProfile};

use super::laguerre::{laguerre, LaguerrePoly};

const SIGN_SAMPLES: usize = 4001;
/// Relative slack for the sampled nonnegativity check, absorbing jet rounding.
const NONNEG_SLACK: f64 = 1e-12;

/// A scalar field that may be constant on the whole plane.
#[derive(Clone, Debug)]
pub enum ScalarField {
    Constant(f64),
    Profile(Profile),
}

impl ScalarField {
    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        match self {
            ScalarField::Constant(c) => *c,
            ScalarField::Profile(p) => p.value(x1, x2),
        }
    }
}

/// b̃ = ∂₂ Re W − ∂₁ Im W.
pub fn magnetic_amplitude(w: &WProfile) -> Result<ScalarField> {
    match w {
        WProfile::Affine { grad, .. } => Ok(ScalarField::Constant(grad[0][1] - grad[1][0])),
        WProfile::RadialGauge { h } => Ok(ScalarField::Profile(Profile::Smooth(h.gauge_field()))),
        WProfile::Grid { .. } => Err(Error::MissingDerivative("sampled W carries no derivative oracle".into())),
    }
}

/// b̃ at a point from first-derivative oracles of W, independent of the
/// closed-form gauge expression.
pub fn magnetic_amplitude_at(w: &WProfile, x1: f64, x2: f64) -> Result<f64> {
    match w {
        WProfile::Affine { grad, .. } => Ok(grad[0][1] - grad[1][0]),
        WProfile::RadialGauge { h } => {
            // Re W = h x2, Im W = −h x1, with ∂_i h = h′ x_i / r
            let r = x1.hypot(x2);
            let jet = h.jet(r, 1)?;
            let (hv, hp) = (jet.value(), jet.derivative_value(1));
            let (d1h, d2h) = if r == 0.0 { (0.0, 0.0) } else { (hp * x1 / r, hp * x2 / r) };
            let d2_re = hv + x2 * d2h;
            let d1_im = -hv - x1 * d1h;
            Ok(d2_re - d1_im)
        }
        WProfile::Grid { .. } => Err(Error::MissingDerivative("sampled W carries no derivative oracle".into())),
    }
}

/// One weighted term c·L(−Δ/2b) applied to a component.
struct Component {
    coef: f64,
    poly: LaguerrePoly,
    field: Field,
}

enum Field {
    Radial(SmoothRadial),
    Grid(Grid2D),
}

fn radial_of(p: &Profile) -> Option<Field> {
    match p {
        Profile::Step(s) if s.annuli().is_empty() => None,
        Profile::Step(s) => Some(Field::Radial(SmoothRadial::from_step(s))),
        Profile::Smooth(s) => Some(Field::Radial(s.clone())),
        Profile::Grid(g) => Some(Field::Grid(g.clone())),
    }
}

/// v_q(V): for q > 0
///   t_q L_q(−Δ/2b) V₁ + (1−t_q) L_{q−1}(−Δ/2b) V₂ + μ_q^{−1} L^{(1)}_{q−1}(−Δ/2b) b̃,
/// for q < 0 the weights of V₁ and V₂ become (1−t_q) and t_q with degrees |q| and |q|−1.
/// Each component must carry 2·deg continuous derivatives.
pub fn effective_symbol(q: i64, v: &PotentialSpec, p: &MagneticParams) -> Result<Profile> {
    if q == 0 {
        return Err(Error::invalid("effective symbol is defined for nonzero levels"));
    }
    p.validate()?;
    let n = q.unsigned_abs() as u32;
    let mu = landau_dirac_level_f64(q, p);
    let t = 0.5 * (1.0 + p.m / mu.abs());
    let (c1, c2) = if q > 0 { (t, 1.0 - t) } else { (1.0 - t, t) };
    let mut comps = Vec::new();
    if let Some(f) = radial_of(&v.v1) {
        comps.push(Component { coef: c1, poly: laguerre(n, 0)?, field: f });
    }
    if let Some(f) = radial_of(&v.v2) {
        comps.push(Component { coef: c2, poly: laguerre(n - 1, 0)?, field: f });
    }
    if let Some(w) = &v.w {
        match magnetic_amplitude(w)? {
            ScalarField::Constant(c) if c == 0.0 => {}
            ScalarField::Constant(_) => {
                return Err(Error::unsupported("constant nonzero b̃ is not compactly supported"))
            }
            ScalarField::Profile(Profile::Smooth(s)) => {
                comps.push(Component { coef: 1.0 / mu, poly: laguerre(n - 1, 1)?, field: Field::Radial(s) })
            }
            ScalarField::Profile(_) => unreachable!("magnetic amplitude profiles are closed-form"),
        }
    }
    let inv_2b = -1.0 / (2.0 * p.b);
    let grid = comps.iter().find_map(|c| match &c.field {
        Field::Grid(g) => Some(g.clone()),
        Field::Radial(_) => None,
    });
    match grid {
        None => {
            let mut terms = Vec::new();
            for c in &comps {
                let Field::Radial(s) = &c.field else { unreachable!() };
                if c.poly.q > 0 {
                    s.require_smoothness(2 * c.poly.q)?;
                }
                for j in 0..=c.poly.q {
                    // t^j with t = −Δ/(2b)
                    let k = c.coef * c.poly.coeff_f64(j as usize) * inv_2b.powi(j as i32);
                    terms.push((k, j, s.clone()));
                }
            }
            if terms.is_empty() {
                return Ok(Profile::zero());
            }
            Ok(Profile::Smooth(SmoothRadial::combination(terms)?))
        }
        Some(lattice) => {
            let mut out = vec![0.0; lattice.values.len()];
            for c in &comps {
                let powers = laplacian_powers(&c.field, &lattice, c.poly.q)?;
                for (j, vals) in powers.iter().enumerate() {
                    let k = c.coef * c.poly.coeff_f64(j) * inv_2b.powi(j as i32);
                    for (o, v) in out.iter_mut().zip(vals) {
                        *o += k * v;
                    }
                }
            }
            Ok(Profile::Grid(Grid2D { values: out, ..lattice }))
        }
    }
}

/// Node values of Δ^j f, j = 0..=deg, on the lattice.
fn laplacian_powers(f: &Field, lattice: &Grid2D, deg: u32) -> Result<Vec<Vec<f64>>> {
    match f {
        Field::Radial(s) => {
            if deg > 0 {
                s.require_smoothness(2 * deg)?;
            }
            let mut out = Vec::with_capacity(deg as usize + 1);
            for j in 0..=deg {
                let mut vals = Vec::with_capacity(lattice.values.len());
                for y in 0..lattice.ny {
                    for x in 0..lattice.nx {
                        let (px, py) = lattice.node_position(x, y);
                        vals.push(s.laplacian(j, px.hypot(py))?);
                    }
                }
                out.push(vals);
            }
            Ok(out)
        }
        Field::Grid(g) => {
            let same = (g.nx, g.ny) == (lattice.nx, lattice.ny)
                && [g.x0, g.y0, g.dx, g.dy] == [lattice.x0, lattice.y0, lattice.dx, lattice.dy];
            let mut cur = if same {
                g.clone()
            } else {
                Grid2D::sample(lattice.x0, lattice.y0, lattice.dx, lattice.dy, lattice.nx, lattice.ny, |x, y| g.value(x, y))?
            };
            let mut out = vec![cur.values.clone()];
            for _ in 0..deg {
                cur = cur.laplacian().0;
                out.push(cur.values.clone());
            }
            Ok(out)
        }
    }
}

fn t1(p: &MagneticParams) -> f64 {
    0.5 * (1.0 + p.m / landau_dirac_level_f64(1, p))
}

/// x = V₁ + ΔV₁/(2b) as a closed-form profile.
fn first_level_combination(v1: &SmoothRadial, p: &MagneticParams) -> Result<SmoothRadial> {
    v1.require_smoothness(2)?;
    SmoothRadial::combination(vec![(1.0, 0, v1.clone()), (1.0 / (2.0 * p.b), 1, v1.clone())])
}

/// V₂ = −2t₁/(1−t₁)·|V₁ + ΔV₁/(2b)|, which makes v₁(V + ε|V|) ≤ 0 whenever (1+ε)/(1−ε) ≤ 2.
pub fn suppressing_v2(v1: &SmoothRadial, p: &MagneticParams) -> Result<Profile> {
    p.validate()?;
    if let Some(r) = v1.sample_radii(SIGN_SAMPLES).into_iter().find(|&r| v1.value(r) < 0.0) {
        return Err(Error::hypothesis(format!("V1 must be nonnegative; V1({r}) = {}", v1.value(r))));
    }
    let x = first_level_combination(v1, p)?;
    let t = t1(p);
    Ok(Profile::Smooth(x.abs().scaled(-2.0 * t / (1.0 - t))))
}

/// V₂ = −t₁/(1−t₁)·(1+ε)/(1−ε)·(V₁ + ΔV₁/(2b)), which makes v₁(V + ε|V|) vanish.
pub fn cancelling_v2(v1: &SmoothRadial, eps: f64, p: &MagneticParams) -> Result<Profile> {
    p.validate()?;
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::invalid(format!("epsilon must lie in [0, 1), got {eps}")));
    }
    let x = first_level_combination(v1, p)?;
    let scale = v1.sample_radii(SIGN_SAMPLES).iter().map(|&r| v1.value(r).abs()).fold(0.0, f64::max);
    for r in v1.sample_radii(SIGN_SAMPLES) {
        let xv = x.value(r);
        if xv < -NONNEG_SLACK * scale {
            return Err(Error::hypothesis(format!(
                "V1 + ΔV1/(2b) must be nonnegative; value {xv:e} at radius {r}"
            )));
        }
    }
    let t = t1(p);
    Ok(Profile::Smooth(x.scaled(-t / (1.0 - t) * (1.0 + eps) / (1.0 - eps))))
}

use landau_core::fock::{
    landau_dirac_level_f64, Grid2D, MagneticParams, PotentialSpec, Profile, SmoothRadial, WProfile,
};
use landau_core::symbol::{
    appendix_bump, bump_eta, cancelling_v2, effective_symbol, laguerre, magnetic_amplitude,
    magnetic_amplitude_at, suppressing_v2, ScalarField,
};
use landau_core::toeplitz::{assemble_dirac_toeplitz, assemble_landau_toeplitz, epsilon_bracket};
use landau_core::Error;
use proptest::prelude::*;

fn params(b: f64, m: f64) -> MagneticParams {
    MagneticParams::new(b, m).unwrap()
}

fn t_coef(q: i64, p: &MagneticParams) -> f64 {
    0.5 * (1.0 + p.m / landau_dirac_level_f64(q, p).abs())
}

fn bump(amp: f64, r: f64, power: u32) -> SmoothRadial {
    SmoothRadial::poly_bump(amp, r, power).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn level_q_diagonal_matches_laguerre_symbol_at_level_zero() {
    // ⟨φ_{k,q}, V φ_{k,q}⟩ against ⟨φ_{k,0}, L_q(−Δ/2b)V φ_{k,0}⟩
    let prec = 192;
    for (b, q) in [(1.0, 1u32), (2.0, 2), (0.7, 3)] {
        let p = params(b, 0.0);
        let v = bump(1.0, 1.5, 10);
        let lag = laguerre(q, 0).unwrap();
        let terms = (0..=q)
            .map(|j| (lag.coeff_f64(j as usize) * (-1.0 / (2.0 * b)).powi(j as i32), j, v.clone()))
            .collect();
        let sym = Profile::Smooth(SmoothRadial::combination(terms).unwrap());
        let direct = assemble_landau_toeplitz(q, &Profile::Smooth(v.clone()), 12, &p, prec).unwrap();
        let reduced = assemble_landau_toeplitz(0, &sym, 12, &p, prec).unwrap();
        for k in 0..=12 {
            let a = direct.get(k, k).re.to_f64();
            let c = reduced.get(k, k).re.to_f64();
            // cancellation among the Laplacian terms costs digits relative to |L_q(−Δ/2b)V|
            let slack = 10.0 * (direct.assembly_error + reduced.assembly_error);
            assert!((a - c).abs() <= 1e-10 * a.abs() + slack, "b={b} q={q} k={k}: {a} vs {c}");
        }
    }
}

#[test]
fn dirac_compression_matches_effective_symbol() {
    // diagonal of T_q(V) against p_0 v_q(V) p_0 for radial V₁, V₂ and gauge W
    let prec = 192;
    let p = params(1.5, 0.6);
    let v = PotentialSpec {
        v1: Profile::Smooth(bump(1.0, 1.2, 10)),
        v2: Profile::Smooth(bump(-0.7, 2.0, 10)),
        w: Some(WProfile::RadialGauge { h: bump(0.4, 1.5, 12) }),
    };
    for q in [1i64, 2, -1, -2] {
        let t = assemble_dirac_toeplitz(q, &v, 10, &p, prec).unwrap();
        let sym = effective_symbol(q, &v, &p).unwrap();
        let s = assemble_landau_toeplitz(0, &sym, 10, &p, prec).unwrap();
        for k in 0..=10 {
            let a = t.get(k, k).re.to_f64();
            let c = s.get(k, k).re.to_f64();
            assert!((a - c).abs() <= 1e-10 * a.abs().max(1e-6), "q={q} k={k}: {a} vs {c}");
        }
    }
}

#[test]
fn first_level_examples() {
    let p = params(2.0, 0.8);
    let t = t_coef(1, &p);
    let v1 = bump(1.0, 1.0, 6);
    let v2 = bump(0.5, 1.3, 6);
    let spec = PotentialSpec::diagonal(Profile::Smooth(v1.clone()), Profile::Smooth(v2.clone()));
    let plus = effective_symbol(1, &spec, &p).unwrap();
    let minus = effective_symbol(-1, &spec, &p).unwrap();
    for r in [0.0, 0.2, 0.5, 0.9, 1.2] {
        let x = v1.value(r) + v1.laplacian(1, r).unwrap() / (2.0 * p.b);
        let want_plus = t * x + (1.0 - t) * v2.value(r);
        let want_minus = (1.0 - t) * x + t * v2.value(r);
        assert!((plus.value(r, 0.0) - want_plus).abs() < 1e-12, "r={r}");
        assert!((minus.value(0.0, r) - want_minus).abs() < 1e-12, "r={r}");
    }
}

#[test]
fn constant_region_gives_scaled_constant() {
    // V₁ ≡ 3 on the lattice interior, q = 2: stencils of constant data vanish
    let p = params(1.0, 0.5);
    let g = Grid2D::sample(-2.0, -2.0, 0.1, 0.1, 41, 41, |x, y| {
        let r = x.abs().max(y.abs());
        if r < 1.2 { 3.0 } else { 3.0 * (2.0 - r) / 0.8 }
    })
    .unwrap();
    let s = effective_symbol(2, &PotentialSpec::diagonal(Profile::Grid(g), Profile::zero()), &p).unwrap();
    let want = t_coef(2, &p) * 3.0;
    for (x, y) in [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.5)] {
        assert!((s.value(x, y) - want).abs() < 1e-12, "({x},{y})");
    }
    // steps carry no derivatives, so degree-2 symbols are rejected
    let step = landau_core::fock::RadialStep::disk(2.0, 3.0).unwrap();
    let err = effective_symbol(2, &PotentialSpec::diagonal(Profile::Step(step), Profile::zero()), &p).unwrap_err();
    assert!(matches!(err, Error::InsufficientSmoothness { .. }));
}

#[test]
fn level_zero_is_rejected() {
    let p = params(1.0, 0.0);
    assert!(effective_symbol(0, &PotentialSpec::zero(), &p).unwrap_err().is_invalid_input());
}

#[test]
fn magnetic_amplitude_routes_agree() {
    let h = bump(0.8, 1.7, 6);
    let w = WProfile::RadialGauge { h };
    let ScalarField::Profile(closed) = magnetic_amplitude(&w).unwrap() else { panic!() };
    for (x, y) in [(0.1, 0.2), (0.7, -0.4), (-1.0, 0.9), (0.0, 0.0)] {
        let a = closed.value(x, y);
        let b = magnetic_amplitude_at(&w, x, y).unwrap();
        assert!((a - b).abs() < 1e-12, "({x},{y}): {a} vs {b}");
    }
    let aff = WProfile::Affine { c: [0.0; 2], grad: [[0.0, 2.0], [0.5, 0.0]] };
    assert!(matches!(magnetic_amplitude(&aff).unwrap(), ScalarField::Constant(c) if c == 1.5));
    let g = Grid2D::sample(0.0, 0.0, 1.0, 1.0, 2, 2, |_, _| 0.0).unwrap();
    let gw = WProfile::Grid { re: g.clone(), im: g };
    assert!(matches!(magnetic_amplitude(&gw), Err(Error::MissingDerivative(_))));
}

#[test]
fn b_tilde_term_sign_follows_level_sign() {
    let p = params(1.0, 0.3);
    let h = bump(1.0, 2.0, 8);
    let v = PotentialSpec { v1: Profile::zero(), v2: Profile::zero(), w: Some(WProfile::RadialGauge { h: h.clone() }) };
    let bt = h.gauge_field();
    for q in [1i64, -1] {
        let s = effective_symbol(q, &v, &p).unwrap();
        for r in [0.0, 0.3, 0.8] {
            let want = bt.value(r) / landau_dirac_level_f64(q, &p);
            assert!((s.value(r, 0.0) - want).abs() < 1e-12);
            assert_eq!(s.value(r, 0.0).signum(), (q as f64).signum() * bt.value(r).signum());
        }
    }
}

#[test]
fn grid_symbol_matches_closed_form_on_lattice() {
    let p = params(1.0, 0.0);
    let v1 = bump(1.0, 1.0, 8);
    let g = Grid2D::sample(-1.5, -1.5, 0.01, 0.01, 301, 301, |x, y| v1.value(x.hypot(y))).unwrap();
    let closed = effective_symbol(1, &PotentialSpec::diagonal(Profile::Smooth(v1.clone()), Profile::zero()), &p).unwrap();
    let grid = effective_symbol(1, &PotentialSpec::diagonal(Profile::Grid(g), Profile::zero()), &p).unwrap();
    for (x, y) in [(0.0, 0.0), (0.3, 0.2), (-0.5, 0.4), (0.1, -0.8)] {
        assert!((closed.value(x, y) - grid.value(x, y)).abs() < 1e-4, "({x},{y})");
    }
}

#[test]
fn suppressing_examples() {
    let p = params(1.0, 0.4);
    let t = t_coef(1, &p);
    let zero = SmoothRadial::combination(vec![(0.0, 0, bump(1.0, 1.0, 4))]).unwrap();
    let s = suppressing_v2(&zero, &p).unwrap();
    assert_eq!(s.value(0.3, 0.0), 0.0);
    let (g, _) = appendix_bump(None, 64).unwrap();
    let v2 = suppressing_v2(&g, &p).unwrap();
    let Profile::Smooth(v2s) = &v2 else { panic!() };
    assert_eq!(v2s.smoothness(), Some(0));
    for r in g.sample_radii(400) {
        assert!(v2.value(r, 0.0) <= 0.0);
    }
    // v_1(V + ε|V|) ≤ 0 for (1+ε)/(1−ε) < 2
    let eps = 0.3;
    let x = SmoothRadial::combination(vec![(1.0, 0, g.clone()), (0.5 / p.b, 1, g.clone())]).unwrap();
    for r in g.sample_radii(400) {
        let v1e = (1.0 + eps) * g.value(r);
        let v2e = (1.0 - eps) * v2.value(r, 0.0);
        let v = t * (1.0 + eps) * x.value(r) + (1.0 - t) * v2e;
        assert!(v <= 1e-14, "r={r}: {v}");
        assert!(v1e >= 0.0);
    }
    let neg = bump(-1.0, 1.0, 4);
    assert!(suppressing_v2(&neg, &p).unwrap_err().is_hypothesis());
}

#[test]
fn cancelling_examples_and_composition() {
    let p = params(0.5, 0.2);
    let t = t_coef(1, &p);
    let (g, _) = appendix_bump(None, 64).unwrap();
    let c0 = cancelling_v2(&g, 0.0, &p).unwrap();
    for r in [0.0, 3.0, 10.0, 15.0] {
        let x = g.value(r) + g.laplacian(1, r).unwrap() / (2.0 * p.b);
        assert!((c0.value(r, 0.0) + t / (1.0 - t) * x).abs() < 1e-14);
    }
    let eps = 0.25;
    let v2 = cancelling_v2(&g, eps, &p).unwrap();
    let spec = PotentialSpec::diagonal(Profile::Smooth(g.clone()), v2);
    let (_, plus) = epsilon_bracket(&spec, eps).unwrap();
    let sym = effective_symbol(1, &plus, &p).unwrap();
    for r in g.sample_radii(300) {
        assert!(sym.value(r, 0.0).abs() < 1e-12, "r={r}: {}", sym.value(r, 0.0));
    }
    // a bump with a sign-changing x violates the hypothesis
    let steep = bump(1.0, 0.3, 6);
    let err = cancelling_v2(&steep, 0.1, &params(1.0, 0.0)).unwrap_err();
    assert!(err.is_hypothesis());
    assert!(err.to_string().contains("radius"));
}

#[test]
fn bump_certificate_passes() {
    let (g, cert) = appendix_bump(None, 2000).unwrap();
    assert!(cert.eta > 1.0 && cert.eta < 2.0);
    assert!(cert.second_derivative_term < cert.g_eta / 2.0);
    assert!(cert.first_derivative_term < cert.g_eta / 2.0);
    assert!(cert.min_g >= 0.0);
    assert!(cert.min_g_plus_laplacian >= -1e-8, "{cert:?}");
    assert!(cert.min_g_plus_laplacian_exact >= 0.0);
    assert!(cert.passed);
    assert_eq!(g.value(2.0 / cert.delta), 0.0);
    assert_eq!(g.value(3.0 / cert.delta), 0.0);
}

#[test]
fn bump_eta_is_bracket_root() {
    let eta = bump_eta();
    let f = |s: f64| 2.0 * (s - 1.0) / (s * s * (s - 2.0).powi(2)) - 1.0 / s;
    assert!(f(eta - 1e-6) < 0.0 && f(eta + 1e-6) > 0.0);
}

#[test]
fn oversized_delta_is_rejected() {
    let err = appendix_bump(Some(5.0), 64).unwrap_err();
    assert!(err.is_hypothesis());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sign_mirror(m in 0.0f64..3.0, b in 0.3f64..3.0, a1 in -2.0f64..2.0, a2 in -2.0f64..2.0, r in 0.0f64..2.0) {
        let p = params(b, m);
        let v1 = bump(a1, 1.4, 6);
        let v2 = bump(a2, 1.1, 6);
        let spec = PotentialSpec::diagonal(Profile::Smooth(v1.clone()), Profile::Smooth(v2.clone()));
        let plus = effective_symbol(1, &spec, &p).unwrap().value(r, 0.0);
        let minus = effective_symbol(-1, &spec, &p).unwrap().value(r, 0.0);
        let t = t_coef(1, &p);
        // v_{−1} is v_1 with t_1 and 1 − t_1 exchanged
        let x = v1.value(r) + v1.laplacian(1, r).unwrap() / (2.0 * b);
        let y = v2.value(r);
        prop_assert!((plus - (t * x + (1.0 - t) * y)).abs() <= 1e-12 * (1.0 + x.abs() + y.abs()));
        prop_assert!((minus - ((1.0 - t) * x + t * y)).abs() <= 1e-12 * (1.0 + x.abs() + y.abs()));
        prop_assert!(rel(plus + minus, x + y) < 1e-9 || (plus + minus - x - y).abs() < 1e-12);
    }
}

use landau_core::fock::{
    build_basis_function, gaussian_moment, ladder_lower, ladder_raise, matrix_element, regularized_lower_gamma,
    BasisIndex, LadderFunction, MagneticParams, Profile, RadialStep,
};
use landau_core::num::{factorial, pi, powu, BigComplex};
use proptest::prelude::*;
use rug::Float;

const PREC: u32 = 192;

fn params(b: f64) -> MagneticParams {
    MagneticParams::new(b, 0.0).unwrap()
}

/// Closed form of the n-fold raising on z^k:
/// (2∂_z − b z̄)^n z^k = Σ_j C(n,j) (−b)^{n−j} 2^j k!/(k−j)! z^{k−j} z̄^{n−j},
/// times (−i)^n and the seed and normalization constants.
fn closed_form_coeff(k: u32, n: u32, j: u32, b: f64, prec: u32) -> BigComplex {
    let bf = Float::with_val(prec, b);
    let seed = (Float::with_val(prec, &bf / (pi(prec) * 2u32 * factorial(prec, k)))
        * powu(&Float::with_val(prec, &bf / 2u32), k))
    .sqrt();
    let norm = (powu(&Float::with_val(prec, &bf * 2u32), n) * factorial(prec, n)).sqrt();
    let binom = factorial(prec, n) / (factorial(prec, j) * factorial(prec, n - j));
    let falling = factorial(prec, k) / factorial(prec, k - j);
    let mut c = binom * falling * powu(&Float::with_val(prec, -&bf), n - j) * powu(&Float::with_val(prec, 2), j);
    c = c * seed / norm;
    // (−i)^n
    let z = BigComplex::real(c);
    match n % 4 {
        0 => z,
        1 => z.mul_neg_i(),
        2 => -z,
        _ => z.mul_i(),
    }
}

#[test]
fn ladder_consistency_against_closed_form() {
    for b in [2.0, 0.7] {
        for k in 0..=5u32 {
            for n in 0..=5u32 {
                let f = build_basis_function(BasisIndex::new(k, n), &params(b), PREC).unwrap();
                let jmax = k.min(n);
                assert_eq!(f.coeffs.len() as u32, jmax + 1, "k={k} n={n}");
                for j in 0..=jmax {
                    let want = closed_form_coeff(k, n, j, b, PREC);
                    let got = f.coeff(k - j, n - j).expect("monomial present");
                    let d = (got - &want).abs();
                    assert!(d <= want.abs() * Float::with_val(PREC, 1e-50), "k={k} n={n} j={j}");
                }
            }
        }
    }
}

#[test]
fn gram_matrix_is_identity() {
    let p = params(2.0);
    let fs: Vec<LadderFunction> = (0..=6)
        .flat_map(|k| (0..=6).map(move |n| (k, n)))
        .map(|(k, n)| build_basis_function(BasisIndex::new(k, n), &p, PREC).unwrap())
        .collect();
    let tol = 10.0 * 2f64.powi(-(PREC as i32) / 2);
    for (a, f) in fs.iter().enumerate() {
        for (c, g) in fs.iter().enumerate() {
            let ip = f.inner(g).to_c64();
            let want = if a == c { 1.0 } else { 0.0 };
            assert!((ip.re - want).abs() <= tol && ip.im.abs() <= tol, "{a} {c}: {ip}");
        }
    }
}

#[test]
fn angular_selection_rule() {
    let p = params(2.0);
    let v = Profile::Step(RadialStep::new(vec![(0.0, 1.0, 1.0), (1.0, 2.5, -0.5)]).unwrap());
    let fs: Vec<LadderFunction> = (0..=8)
        .flat_map(|k| (0..=8).map(move |n| (k, n)))
        .map(|(k, n)| build_basis_function(BasisIndex::new(k, n), &p, 128).unwrap())
        .collect();
    for f in &fs {
        for g in &fs {
            let (fi, gi) = (f.index.unwrap(), g.index.unwrap());
            if fi.angular_momentum() != gi.angular_momentum() {
                let e = matrix_element(&v, f, g, 128).unwrap();
                assert!(e.value.is_zero());
            }
        }
    }
}

#[test]
fn level_zero_disk_elements_are_incomplete_gamma() {
    let p = params(2.0);
    let r: f64 = 1.4;
    let v = Profile::Step(RadialStep::disk(r, 1.0).unwrap());
    for k in [0u32, 1, 7, 30] {
        let f = build_basis_function(BasisIndex::new(k, 0), &p, PREC).unwrap();
        let e = matrix_element(&v, &f, &f, PREC).unwrap();
        let want = regularized_lower_gamma(k, &Float::with_val(PREC, r * r), PREC);
        let d = Float::with_val(PREC, &e.value.re - &want).abs();
        assert!(d < 1e-50, "k={k}");
        // ⟨φ00, χ φ00⟩ = 1 − e^{−bR²/2}
        if k == 0 {
            assert!((e.value.re.to_f64() - (1.0 - (-r * r).exp())).abs() < 1e-15);
        }
    }
}

#[test]
fn moment_of_empty_disk_is_zero() {
    let v = RadialStep::disk(0.0, 1.0).unwrap();
    assert!(gaussian_moment(0, &v, 2.0, 128).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monomial_degree_law(k in 0u32..10, n in 0u32..10, b in 0.2f64..4.0) {
        let f = build_basis_function(BasisIndex::new(k, n), &params(b), 128).unwrap();
        for &(i, j) in f.coeffs.keys() {
            prop_assert!(i <= k && j <= n);
            prop_assert_eq!(i as i64 - j as i64, k as i64 - n as i64);
        }
    }

    #[test]
    fn raise_then_lower_scales_by_level(k in 0u32..6, n in 0u32..6, b in 0.2f64..4.0) {
        let f = build_basis_function(BasisIndex::new(k, n), &params(b), 160).unwrap();
        let g = ladder_lower(&ladder_raise(&f));
        let factor = Float::with_val(160, b) * (2 * (n + 1));
        for (&(i, j), c) in &f.coeffs {
            let d = g.coeff(i, j).unwrap();
            let diff = (d - &c.scale(&factor)).abs().to_f64();
            prop_assert!(diff <= 1e-35 * c.abs().to_f64() * factor.to_f64());
        }
    }

    #[test]
    fn raised_norm_is_ladder_eigenvalue(k in 0u32..6, n in 0u32..6, b in 0.2f64..4.0) {
        let f = build_basis_function(BasisIndex::new(k, n), &params(b), 160).unwrap();
        let g = ladder_raise(&f);
        let want = 2.0 * b * (n + 1) as f64;
        prop_assert!((g.norm_sq.to_f64() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn radial_elements_are_hermitian(j in 0u32..5, m in 0u32..4, n in 0u32..4, r in 0.3f64..3.0) {
        let p = params(1.5);
        let k = (j as i64 - m as i64 + n as i64).max(0) as u32;
        let f = build_basis_function(BasisIndex::new(j, m), &p, 128).unwrap();
        let g = build_basis_function(BasisIndex::new(k, n), &p, 128).unwrap();
        let v = Profile::Step(RadialStep::disk(r, 1.0).unwrap());
        let a = matrix_element(&v, &f, &g, 128).unwrap().value.to_c64();
        let b = matrix_element(&v, &g, &f, 128).unwrap().value.to_c64();
        prop_assert!((a - b.conj()).norm() < 1e-14);
    }
}

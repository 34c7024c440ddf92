use std::f64::consts::E;

use landau_core::asymptotics::{
    lambda_from_log, limit_fit, sandwich_report, three_term_from_log, three_term_value, weyl_sequence,
    weyl_sequence_from_values,
};
use landau_core::fock::{regularized_lower_gamma, MagneticParams, Profile, RadialStep};
use landau_core::num::{factorial, powu};
use landau_core::toeplitz::{assemble_landau_toeplitz, hermitian_eigenvalues, Sign, Spectrum};
use landau_core::Error;
use proptest::prelude::*;
use rug::Float;

const PREC: u32 = 256;

/// ν_k = C^k / k!, k = 0..n.
fn synthetic(c: f64, n: u32) -> Vec<Float> {
    (0..n)
        .map(|k| {
            powu(&Float::with_val(PREC, c), k) / factorial(PREC, k)
        })
        .collect()
}

fn disk_oracle(b: f64, r: f64, n: u32) -> Vec<Float> {
    let x = Float::with_val(PREC, b * r * r / 2.0);
    (0..n).map(|k| regularized_lower_gamma(k, &x, PREC)).collect()
}

fn spectrum(values: Vec<Float>) -> Spectrum {
    Spectrum::new(values, PREC, "synthetic".into(), 0.0)
}

#[test]
fn synthetic_sequence_is_constant() {
    let ws = weyl_sequence_from_values(&synthetic(1.7, 40), 1, 39, Sign::Plus).unwrap();
    for s in &ws.s {
        assert!((s - 1.7).abs() < 1e-13);
    }
    let fit = limit_fit(&ws).unwrap();
    assert!((fit.slope_limit - 1.7).abs() < 1e-10);
    assert!((fit.liminf_est - 1.7).abs() < 1e-10 && (fit.limsup_est - 1.7).abs() < 1e-10);
}

#[test]
fn disk_sequence_slope_recovers_limit() {
    for (b, r) in [(2.0, 1.0), (2.0, 2.0), (1.0, 1.0)] {
        let ws = weyl_sequence_from_values(&disk_oracle(b, r, 61), 20, 60, Sign::Plus).unwrap();
        let fit = limit_fit(&ws).unwrap();
        let want = b * r * r / 2.0;
        assert!((fit.slope_limit - want).abs() <= 0.02 * want, "b={b} R={r}: {}", fit.slope_limit);
    }
}

#[test]
fn toeplitz_spectrum_feeds_weyl_sequence() {
    let p = MagneticParams::new(2.0, 0.0).unwrap();
    let v = Profile::Step(RadialStep::disk(1.0, 1.0).unwrap());
    let h = assemble_landau_toeplitz(0, &v, 40, &p, 512).unwrap();
    let spec = hermitian_eigenvalues(&h, 512).unwrap();
    let ws = weyl_sequence(&spec, 10, 30, Sign::Plus).unwrap();
    let oracle = weyl_sequence_from_values(&disk_oracle(2.0, 1.0, 41), 10, 30, Sign::Plus).unwrap();
    for (a, b) in ws.s.iter().zip(&oracle.s) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn alternating_sequence_separates_limits() {
    let (a, b) = (synthetic(1.0, 50), synthetic(3.0, 50));
    let nu: Vec<Float> = (0..50).map(|k| if k % 2 == 0 { a[k].clone() } else { b[k].clone() }).collect();
    let ws = weyl_sequence_from_values(&nu, 10, 49, Sign::Plus).unwrap();
    let fit = limit_fit(&ws).unwrap();
    assert!(fit.liminf_est < fit.limsup_est * 0.7, "{fit:?}");
}

#[test]
fn finite_rank_beyond_rank_is_error() {
    let spec = spectrum(synthetic(1.0, 5));
    let err = weyl_sequence(&spec, 1, 10, Sign::Plus).unwrap_err();
    assert!(matches!(err, Error::InsufficientData { usable: 5, .. }));
}

#[test]
fn three_term_examples() {
    let l = E.powf(E);
    let lam = lambda_from_log(l, PREC);
    let c = 0.7;
    let want = l / E + l / (E * E) + c * l / (E * E);
    assert!((three_term_value(&lam, c).unwrap() - want).abs() < 1e-12);
    let two = l / E + l / (E * E);
    assert!((three_term_value(&lam, 0.0).unwrap() - two).abs() < 1e-12);
    assert!(three_term_value(&Float::with_val(PREC, 0.5), 0.0).unwrap_err().is_invalid_input());
    assert!(three_term_value(&Float::with_val(PREC, 2.0), 0.0).unwrap_err().is_invalid_input());
}

#[test]
fn three_term_is_monotone_on_log_grid() {
    for c in [0.0, 0.5, 2.0] {
        let vals: Vec<f64> = (0..200).map(|i| three_term_from_log(16.0 + i as f64 * 5.0, c).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]), "c={c}");
    }
}

#[test]
fn three_term_is_continuous() {
    let lam = lambda_from_log(80.0, PREC);
    let bumped = Float::with_val(PREC, &lam * Float::with_val(PREC, 1e-30).exp_m1().exp());
    let a = three_term_value(&lam, 1.0).unwrap();
    let b = three_term_value(&bumped, 1.0).unwrap();
    assert!((a - b).abs() < 1e-12 * a);
}

#[test]
fn disk_oracle_is_monotone() {
    // k! ν_k = γ(k+1, bR²/2): increasing in R, decreasing in k
    let scaled = |r: f64, k: u32| {
        let nu = disk_oracle(2.0, r, k + 1).pop().unwrap();
        Float::with_val(PREC, nu * factorial(PREC, k))
    };
    for k in 1..30 {
        assert!(scaled(1.0, k) < scaled(1.2, k));
        assert!(scaled(1.0, k + 1) < scaled(1.0, k));
    }
}

#[test]
fn synthetic_counting_is_exact() {
    let nu = synthetic(2.0, 60);
    let spec = spectrum(nu.clone());
    let lambdas: Vec<Float> = [20.0, 40.0, 60.0].iter().map(|&l| lambda_from_log(l, PREC)).collect();
    let rep = sandwich_report(&spec, 0.0, 1.0, &lambdas, 0.5).unwrap();
    for (row, lam) in rep.rows.iter().zip(&lambdas) {
        let brute = nu.iter().filter(|v| *v > lam).count();
        assert_eq!(row.n_plus, brute);
    }
    assert!(rep.applicable);
}

#[test]
fn empty_spectrum_is_flagged() {
    let spec = spectrum(vec![Float::with_val(PREC, -1.0)]);
    let rep = sandwich_report(&spec, 0.0, 0.0, &[lambda_from_log(30.0, PREC)], 0.5).unwrap();
    assert!(!rep.applicable);
    assert_eq!(rep.rows[0].n_plus, 0);
    assert!(sandwich_report(&spec, 1.0, 0.0, &[], 0.0).unwrap_err().is_invalid_input());
}

#[test]
fn disk_residual_stays_bounded() {
    let spec = spectrum(disk_oracle(2.0, 1.0, 80));
    let lambdas: Vec<Float> = (0..9).map(|i| lambda_from_log(50.0 + 10.0 * i as f64, PREC)).collect();
    let rep = sandwich_report(&spec, 1.0, 1.0, &lambdas, 0.75).unwrap();
    for row in &rep.rows {
        assert!(row.residual.abs() < 3.0, "{row:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn synthetic_limit_is_exact(c in 0.2f64..5.0) {
        let ws = weyl_sequence_from_values(&synthetic(c, 30), 1, 29, Sign::Plus).unwrap();
        let fit = limit_fit(&ws).unwrap();
        prop_assert!((fit.slope_limit - c).abs() < 1e-9 * c);
    }
}

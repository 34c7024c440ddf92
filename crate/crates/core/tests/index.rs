use landau_core::index::{
    index_pair, index_pair_both, numerical_rank, random_hermitian, random_low_rank, run_suite, sign_ranks, spectral_projection_below,
    split_signs, verify_le42, verify_monotonicity, verify_rank_bounds, xi, CMatrix, ProjectionPair, Suite,
};
use landau_core::Error;
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn diag(v: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::from(x))))
}

/// Orthogonal projection onto the span of the given columns.
fn projection_onto(cols: &[DVector<Complex64>], n: usize) -> CMatrix {
    if cols.is_empty() {
        return CMatrix::zeros(n, n);
    }
    let b = CMatrix::from_columns(cols);
    let qr = b.qr();
    let q = qr.q();
    let r = cols.len();
    let q = q.columns(0, r);
    q * q.adjoint()
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    g.qr().q()
}

#[test]
fn equal_projections_have_zero_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_unitary(&mut rng, 6);
    let cols: Vec<_> = (0..3).map(|i| u.column(i).into_owned()).collect();
    let p = projection_onto(&cols, 6);
    assert_eq!(index_pair(&ProjectionPair::new(p.clone(), p).unwrap()).unwrap(), 0);
}

#[test]
fn rank_r_against_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for r in 0..=5 {
        let u = random_unitary(&mut rng, 5);
        let cols: Vec<_> = (0..r).map(|i| u.column(i).into_owned()).collect();
        let p = projection_onto(&cols, 5);
        let v = index_pair_both(&ProjectionPair::new(p, CMatrix::zeros(5, 5)).unwrap()).unwrap();
        assert_eq!((v.trace, v.kernel), (r as i64, r as i64));
    }
}

#[test]
fn commuting_pairs_match_explicit_kernel_dimensions() {
    // P, Q diagonal in a common random basis: Ran P ∩ Ker Q has dimension r_P − r_∩.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let n = rng.gen_range(2..=20);
        let u = random_unitary(&mut rng, n);
        let r_cap = rng.gen_range(0..=n / 2);
        let r_p = r_cap + rng.gen_range(0..=(n - r_cap) / 2);
        let r_q = r_cap + rng.gen_range(0..=n - r_p);
        let p_idx: Vec<usize> = (0..r_p).collect();
        let q_idx: Vec<usize> = (0..r_cap).chain(r_p..r_p + (r_q - r_cap)).collect();
        let cols = |idx: &[usize]| idx.iter().map(|&i| u.column(i).into_owned()).collect::<Vec<_>>();
        let p = projection_onto(&cols(&p_idx), n);
        let q = projection_onto(&cols(&q_idx), n);
        let v = index_pair_both(&ProjectionPair::new(p, q).unwrap()).unwrap();
        let expected = (r_p - r_cap) as i64 - (r_q - r_cap) as i64;
        assert_eq!(v.trace, r_p as i64 - r_q as i64);
        assert_eq!(v.kernel, expected);
    }
}

#[test]
fn non_projection_is_rejected() {
    let m = diag(&[1.0, 0.5]);
    assert!(matches!(ProjectionPair::new(m, CMatrix::zeros(2, 2)), Err(Error::InvalidInput(_))));
}

#[test]
fn zero_perturbation_gives_zero_xi() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = random_hermitian(&mut rng, 8, 1.0);
    let z = CMatrix::zeros(8, 8);
    for l in [-3.3, -1.1, 0.05, 0.9, 2.7] {
        match xi(l, &a, &z) {
            Ok(x) => assert_eq!(x, 0),
            Err(Error::Inadmissible { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
    let r = verify_le42(&a, &z, -5.0, 5.0).unwrap();
    assert_eq!((r.xi_lo, r.xi_hi, r.count_a, r.count_b), (0, 0, 8, 8));
}

#[test]
fn two_by_two_example() {
    let a = diag(&[0.0, 2.0]);
    let m = diag(&[3.0, 0.0]);
    let (_, rank_a) = spectral_projection_below(&a, 1.0).unwrap();
    let (_, rank_b) = spectral_projection_below(&(&a + &m), 1.0).unwrap();
    assert_eq!((rank_a, rank_b), (1, 0));
    assert_eq!(xi(1.0, &a, &m).unwrap(), 1);
}

#[test]
fn eigenvalue_at_lambda_is_inadmissible() {
    let a = diag(&[0.0, 2.0]);
    assert!(matches!(xi(2.0, &a, &CMatrix::zeros(2, 2)), Err(Error::Inadmissible { .. })));
}

#[test]
fn rank_one_positive_xi_is_zero_or_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.gen_range(2..=15);
        let a = random_hermitian(&mut rng, n, 2.0);
        let m = random_low_rank(&mut rng, n, 1, Some(1.0));
        let l = rng.gen_range(-3.0..3.0);
        let x = xi(l, &a, &m).unwrap();
        // Interlacing: N(<λ; A) − N(<λ; A + M) ∈ {0, 1}.
        let below = |h: &CMatrix| h.clone().symmetric_eigenvalues().iter().filter(|&&e| e < l).count() as i64;
        assert_eq!(x, below(&a) - below(&(&a + &m)));
        assert!(x == 0 || x == 1);
    }
}

#[test]
fn single_crossing_counts_one() {
    // A = diag(−1, 3), M moves the first eigenvalue from −1 to 1; [0, 2) catches it.
    let a = diag(&[-1.0, 3.0]);
    let m = diag(&[2.0, 0.0]);
    let r = verify_le42(&a, &m, 0.0, 2.0).unwrap();
    assert_eq!(r.xi_lo - r.xi_hi, 1);
    assert_eq!(r.count_b as i64 - r.count_a as i64, 1);
    assert!(r.holds);
    let r = verify_le42(&(&a + &m), &(-&m), 0.0, 2.0).unwrap();
    assert_eq!(r.xi_lo - r.xi_hi, -1);
    assert!(r.holds);
}

#[test]
fn sign_definite_rank_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..40 {
        let n = rng.gen_range(2..=12);
        let a = random_hermitian(&mut rng, n, 2.0);
        let r = rng.gen_range(1..=n);
        let pos = random_low_rank(&mut rng, n, r, Some(1.0));
        let l = rng.gen_range(-2.0..2.0);
        let rp = verify_rank_bounds(&a, &pos, l).unwrap();
        assert!(rp.xi >= 0 && rp.xi <= rp.rank_plus as i64 && rp.rank_minus == 0);
        assert_eq!(rp.rank_plus, r);
        let rn = verify_rank_bounds(&a, &(-pos), l).unwrap();
        assert!(rn.xi <= 0 && rn.rank_plus == 0);
    }
}

#[test]
fn sign_split_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = random_hermitian(&mut rng, 9, 1.0);
    let (p, q) = split_signs(&m);
    assert!((&p - &q - &m).norm() < 1e-12);
    assert_eq!(numerical_rank(&p) + numerical_rank(&q), 9);
    assert_eq!(sign_ranks(&m), (numerical_rank(&p), numerical_rank(&q)));
    let low = random_low_rank(&mut rng, 9, 3, Some(1.0));
    assert_eq!(sign_ranks(&low), (3, 0));
}

#[test]
fn equal_perturbations_are_monotone_with_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = random_hermitian(&mut rng, 10, 2.0);
    let m = random_low_rank(&mut rng, 10, 4, None);
    let r = verify_monotonicity(&a, &m, &m, 0.37).unwrap();
    assert_eq!(r.xi1, r.xi2);
    assert!(r.additive);
    assert_eq!(r.chain[1], 0);
}

#[test]
fn unordered_perturbations_are_rejected() {
    let a = diag(&[0.0, 2.0]);
    let m1 = diag(&[1.0, 0.0]);
    let m2 = diag(&[0.0, 1.0]);
    assert!(matches!(verify_monotonicity(&a, &m1, &m2, 1.0), Err(Error::Hypothesis(_))));
}

#[test]
fn rank_one_increment_raises_xi() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..60 {
        let n = rng.gen_range(2..=15);
        let a = random_hermitian(&mut rng, n, 2.0);
        let r = rng.gen_range(0..=n);
        let m2 = random_low_rank(&mut rng, n, r, None);
        let m1 = &m2 + random_low_rank(&mut rng, n, 1, Some(1.0));
        let r = verify_monotonicity(&a, &m1, &m2, rng.gen_range(-2.0..2.0)).unwrap();
        assert!(r.xi1 - r.xi2 == 0 || r.xi1 - r.xi2 == 1);
        assert!(r.additive);
    }
}

#[test]
fn random_suites_have_no_failures() {
    for suite in [Suite::Le42, Suite::RankBounds, Suite::Monotonicity, Suite::Additivity] {
        let r = run_suite(suite, 17, 60, 25);
        assert_eq!(r.failures, 0, "{suite:?}: {:?}", r.first_failure);
    }
}

#[test]
fn suites_are_deterministic() {
    let a = run_suite(Suite::Le42, 99, 10, 12);
    let b = run_suite(Suite::Le42, 99, 10, 12);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn index_is_antisymmetric(seed in any::<u64>(), n in 2usize..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(&mut rng, n);
        let v = random_unitary(&mut rng, n);
        let rp = rng.gen_range(0..=n);
        let rq = rng.gen_range(0..=n);
        let p = projection_onto(&(0..rp).map(|i| u.column(i).into_owned()).collect::<Vec<_>>(), n);
        let q = projection_onto(&(0..rq).map(|i| v.column(i).into_owned()).collect::<Vec<_>>(), n);
        let pq = index_pair_both(&ProjectionPair::new(p.clone(), q.clone()).unwrap()).unwrap();
        let qp = index_pair_both(&ProjectionPair::new(q, p).unwrap()).unwrap();
        prop_assert_eq!(pq.trace, -qp.trace);
        prop_assert_eq!(pq.kernel, pq.trace);
        prop_assert_eq!(pq.trace, rp as i64 - rq as i64);
    }

    #[test]
    fn xi_is_constant_between_eigenvalues(seed in any::<u64>(), n in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(&mut rng, n, 2.0);
        let r = rng.gen_range(0..=n);
        let m = random_low_rank(&mut rng, n, r, None);
        let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter()
            .chain((&a + &m).symmetric_eigenvalues().iter()).cloned().collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for w in ev.windows(2) {
            if w[1] - w[0] < 1e-6 {
                continue;
            }
            let pts: Vec<f64> = (1..4).map(|j| w[0] + (w[1] - w[0]) * j as f64 / 4.0).collect();
            let vals: Vec<i64> = pts.iter().map(|&l| xi(l, &a, &m).unwrap()).collect();
            prop_assert!(vals.iter().all(|&v| v == vals[0]));
        }
    }
}

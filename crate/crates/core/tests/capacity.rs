use std::f64::consts::PI;

use landau_core::capacity::{
    asym_constant, asym_constant_from_capacity, capacity_estimate, chebyshev_bound, chebyshev_bound_with_roots,
    encircles, monic_l2_minimum, monic_l2_sequence, transfinite_diameter, transfinite_sequence, AsymSource,
    Encirclement, Region, OPTIMIZER_TOL,
};
use landau_core::fock::{Grid2D, Profile, RadialStep, SmoothRadial};
use landau_core::num::{pi, powu};
use landau_core::toeplitz::Sign;
use landau_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rug::Float;

fn square() -> Region {
    Region::Polygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]] }
}

fn segment(l: f64) -> Region {
    Region::Segment { a: [-l / 2.0, 0.0], b: [l / 2.0, 0.0] }
}

/// Γ(1/4)² / (4π^{3/2}) through Γ(1/4)² = (2π)^{3/2} / AGM(1, √2), which
/// reduces to 1 / (√2 · AGM(1, √2)).
fn square_capacity_oracle() -> f64 {
    let prec = 256;
    let (mut a, mut g) = (Float::with_val(prec, 1), Float::with_val(prec, 2).sqrt());
    for _ in 0..40 {
        let an = Float::with_val(prec, &a + &g) / 2;
        g = Float::with_val(prec, &a * &g).sqrt();
        a = an;
    }
    let denom = Float::with_val(prec, 2).sqrt() * a;
    Float::with_val(prec, 1 / denom).to_f64()
}

#[test]
fn square_oracle_value() {
    assert!((square_capacity_oracle() - 0.590170299508048).abs() < 1e-14);
}

#[test]
fn segment_two_points_is_length() {
    let t = transfinite_diameter(&segment(3.0), 2).unwrap();
    assert!((t.value - 3.0).abs() < 1e-12);
}

#[test]
fn disk_fekete_matches_equally_spaced_oracle() {
    let r = 1.7;
    let d = Region::Disk { center: [0.3, -0.2], radius: r };
    for n in [3usize, 7, 16] {
        let t = transfinite_diameter(&d, n).unwrap();
        let want = r * (n as f64).powf(1.0 / (n as f64 - 1.0));
        assert!(t.converged);
        assert!((t.value - want).abs() <= 1e-8 * want, "n={n}: {} vs {want}", t.value);
    }
}

#[test]
fn chebyshev_examples() {
    let d = Region::Disk { center: [1.0, 2.0], radius: 0.8 };
    let v = chebyshev_bound_with_roots(&d, &[Complex64::new(1.0, 2.0); 5]).unwrap();
    assert!((v - 0.8).abs() < 1e-12);
    // Chebyshev nodes on [−1, 1]: sup |T_n| / 2^{n−1} = 2^{1−n}
    let seg = segment(2.0);
    for n in [1usize, 4, 9, 20] {
        let roots: Vec<Complex64> =
            (1..=n).map(|i| Complex64::new(((2 * i - 1) as f64 * PI / (2 * n) as f64).cos(), 0.0)).collect();
        let v = chebyshev_bound_with_roots(&seg, &roots).unwrap();
        let want = 2f64.powf((1.0 - n as f64) / n as f64);
        assert!((v - want).abs() < 1e-9, "n={n}: {v} vs {want}");
    }
    // n = 1 with the root at the centroid: farthest point of E
    let v = chebyshev_bound_with_roots(&square(), &[Complex64::new(0.5, 0.5)]).unwrap();
    assert!((v - 0.5f64.sqrt()).abs() < 1e-12);
    // Leja roots give an upper bound on Cap(disk) = R
    let u = chebyshev_bound(&Region::disk(1.0), 12).unwrap();
    assert!(u >= 1.0 - 1e-12);
}

#[test]
fn disk_capacity_estimate() {
    let e = capacity_estimate(&Region::disk(1.0), 80).unwrap();
    assert!((e.extrapolated - 1.0).abs() <= 1e-3, "{}", e.extrapolated);
    assert!(e.monotone);
    let min_upper = e.upper_seq.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(e.extrapolated <= min_upper + OPTIMIZER_TOL);
}

#[test]
fn segment_capacity_estimate() {
    let e = capacity_estimate(&segment(4.0), 60).unwrap();
    assert!((e.extrapolated - 1.0).abs() <= 5e-3, "{}", e.extrapolated);
    assert!(e.monotone);
    let min_upper = e.upper_seq.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(e.extrapolated <= min_upper + OPTIMIZER_TOL);
}

#[test]
fn square_capacity_estimate() {
    let e = capacity_estimate(&square(), 60).unwrap();
    let want = square_capacity_oracle();
    assert!((e.extrapolated - want).abs() <= 5e-3, "{} vs {want}", e.extrapolated);
    let min_upper = e.upper_seq.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(e.extrapolated <= min_upper + OPTIMIZER_TOL);
}

#[test]
fn disjoint_disks_dominate_each_part() {
    let two = Region::Union {
        parts: vec![
            Region::Disk { center: [-5.0, 0.0], radius: 0.5 },
            Region::Disk { center: [5.0, 0.0], radius: 0.5 },
        ],
    };
    let seq = transfinite_sequence(&two, 20).unwrap();
    let one = transfinite_sequence(&Region::Disk { center: [-5.0, 0.0], radius: 0.5 }, 20).unwrap();
    for (a, b) in seq.iter().zip(&one) {
        assert!(a.value >= b.value * (1.0 - OPTIMIZER_TOL));
    }
}

#[test]
fn too_short_sequence_is_rejected() {
    assert!(matches!(capacity_estimate(&Region::disk(1.0), 5), Err(Error::InsufficientData { .. })));
    assert!(transfinite_diameter(&Region::disk(1.0), 1).unwrap_err().is_invalid_input());
}

#[test]
fn region_json_round_trip() {
    let r: Region = serde_json::from_str(r#"{"kind":"polygon","vertices":[[0,0],[1,0],[0,1]]}"#).unwrap();
    assert_eq!(r, Region::Polygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] });
    let back: Region = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    let bad = Region::Disk { center: [0.0, 0.0], radius: -1.0 };
    assert!(bad.validate().is_err());
}

fn disk_weight(r: f64) -> Profile {
    Profile::Step(RadialStep::disk(r, 1.0).unwrap())
}

#[test]
fn monic_minimum_disk_closed_form() {
    let prec = 256;
    for r in [0.5, 1.0, 2.0] {
        let seq = monic_l2_sequence(&disk_weight(r), 12, prec).unwrap();
        for (k, m) in seq.iter().enumerate() {
            // π R^{2k+2} / (k+1), evaluated directly
            let want = pi(prec) * powu(&Float::with_val(prec, r), 2 * k as u32 + 2) / (k as u32 + 1);
            let rel = Float::with_val(prec, m - &want).abs() / &want;
            assert!(rel < 1e-70, "r={r} k={k}");
        }
    }
}

#[test]
fn monic_minimum_zero_is_mass() {
    let s = RadialStep::new(vec![(0.0, 1.0, 2.0), (1.0, 1.5, 0.5)]).unwrap();
    let m0 = monic_l2_minimum(&Profile::Step(s), 0, 128).unwrap().to_f64();
    let mass = 2.0 * PI + 0.5 * PI * (2.25 - 1.0);
    assert!((m0 - mass).abs() < 1e-13);
    let smooth = SmoothRadial::poly_bump(1.0, 1.0, 2).unwrap();
    // ∫ (1 − r²)² dm = π/3
    let m0 = monic_l2_minimum(&Profile::Smooth(smooth), 0, 128).unwrap().to_f64();
    assert!((m0 - PI / 3.0).abs() < 1e-12);
}

#[test]
fn monic_minimum_root_law() {
    // M_k^{1/k} → R² (within 2% at k = 40 for R = 3)
    let m = monic_l2_minimum(&disk_weight(3.0), 40, 256).unwrap();
    let root = m.to_f64().powf(1.0 / 40.0);
    assert!((root / 9.0 - 1.0).abs() < 0.02, "{root}");
}

#[test]
fn grid_weight_matches_radial_and_is_positive() {
    let h = 0.004;
    let n = 751;
    let g = Grid2D::sample(-1.5, -1.5, h, h, n, n, |x, y| if x.hypot(y) <= 1.0 { 1.0 } else { 0.0 }).unwrap();
    let seq = monic_l2_sequence(&Profile::Grid(g), 3, 128).unwrap();
    for (k, m) in seq.iter().enumerate() {
        let want = PI / (k + 1) as f64;
        assert!((m.to_f64() - want).abs() < 2e-2 * want, "k={k}: {} vs {want}", m.to_f64());
        assert!(m.is_sign_positive());
    }
}

#[test]
fn gram_of_point_mass_is_singular() {
    let g = Grid2D::sample(-1.0, -1.0, 1.0, 1.0, 3, 3, |x, y| if x == 0.0 && y == 0.0 { 1.0 } else { 0.0 }).unwrap();
    assert!(matches!(monic_l2_minimum(&Profile::Grid(g), 2, 128), Err(Error::SingularGram { order: 1 })));
}

#[test]
fn asym_constant_examples() {
    let e = std::f64::consts::E;
    assert!((asym_constant_from_capacity(1.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
    assert!((asym_constant_from_capacity(e.sqrt(), 2.0).unwrap() - 2.0).abs() < 1e-15);
    let c = asym_constant(&AsymSource::Region(segment(4.0)), 2.0, Sign::Plus, 40).unwrap();
    assert!((c.value - 1.0).abs() < 1e-15);
    let v = Profile::Step(RadialStep::disk(1.0, 3.0).unwrap());
    let plus = asym_constant(&AsymSource::Potential(v.clone()), 2.0, Sign::Plus, 40).unwrap();
    let minus = asym_constant(&AsymSource::Potential(v), 2.0, Sign::Minus, 40).unwrap();
    assert_eq!(plus.value, minus.value);
    let smooth = Profile::Smooth(SmoothRadial::poly_bump(1.0, 1.0, 3).unwrap());
    assert!(matches!(
        asym_constant(&AsymSource::Potential(smooth), 2.0, Sign::Minus, 40),
        Err(Error::Unsupported(_))
    ));
}

fn annulus(inner: f64, outer: f64) -> Region {
    Region::Annulus { center: [0.0, 0.0], inner, outer }
}

#[test]
fn encirclement_canonical_cases() {
    let k = Region::disk(0.5);
    let r = encircles(&annulus(1.0, 2.0), &k, 256).unwrap();
    assert_eq!(r.status, Encirclement::Encircled);
    let far = Region::Disk { center: [5.0, 0.0], radius: 1.0 };
    assert_eq!(encircles(&far, &k, 256).unwrap().status, Encirclement::NotEncircled);
    let slit = Region::Difference {
        base: Box::new(annulus(1.0, 2.0)),
        minus: Box::new(Region::Polygon { vertices: vec![[0.9, -0.1], [2.1, -0.1], [2.1, 0.1], [0.9, 0.1]] }),
    };
    assert_eq!(encircles(&slit, &k, 256).unwrap().status, Encirclement::NotEncircled);
}

#[test]
fn encirclement_touching_is_unresolved() {
    // K reaches the outer edge of the hole: no margin to the unbounded component
    let r = encircles(&annulus(1.0, 2.0), &Region::disk(2.0), 128).unwrap();
    assert_ne!(r.status, Encirclement::Encircled);
}

#[test]
fn raster_dump_is_pgm() {
    let r = encircles(&annulus(1.0, 2.0), &Region::disk(0.5), 32).unwrap();
    let mut buf = Vec::new();
    r.raster.write_pgm(&mut buf).unwrap();
    assert!(buf.starts_with(b"P5\n32 32\n255\n"));
    assert_eq!(buf.len(), 13 + 32 * 32);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn scaling_law(s in prop::sample::select(vec![0.5, 2.0]), n in 3usize..12) {
        let base = square();
        let a = transfinite_diameter(&base, n).unwrap().value;
        let b = transfinite_diameter(&base.scaled(s), n).unwrap().value;
        prop_assert!((b - s * a).abs() <= OPTIMIZER_TOL * s * a, "{} vs {}", b, s * a);
    }

    #[test]
    fn inclusion_monotonicity(r in 0.2f64..0.9, n in 3usize..10) {
        let small = Region::disk(r);
        let big = square().scaled(2.0);
        let shifted = Region::Disk { center: [1.0, 1.0], radius: r };
        let a = transfinite_diameter(&shifted, n).unwrap().value;
        let b = transfinite_diameter(&big, n).unwrap().value;
        prop_assert!(a <= b * (1.0 + OPTIMIZER_TOL));
        prop_assert!(transfinite_diameter(&small, n).unwrap().value <= 2.0 * r * (1.0 + OPTIMIZER_TOL) * (n as f64).powf(1.0 / (n as f64 - 1.0)) / 2.0 + 1e-12);
    }
}

//! Regularized incomplete gamma functions of integer order and radial
//! Gaussian moments of step profiles.

use rug::Float;

use super::profile::RadialStep;
use crate::num::{factorial, pi, powu};

const GUARD_BITS: u32 = 32;

/// (P, Q) for order k+1 at x, where P(k+1, x) = γ(k+1, x)/k! and Q = 1 − P.
///
/// The smaller of the two is summed directly so neither suffers cancellation:
/// for x < k+1 the tail e^{−x} Σ_{j>k} x^j/j! gives P, otherwise the finite
/// sum e^{−x} Σ_{j≤k} x^j/j! gives Q.
fn gamma_pq(k: u32, x: &Float, prec: u32) -> (Float, Float) {
    let wp = prec + GUARD_BITS;
    if *x <= 0 {
        return (Float::with_val(prec, 0), Float::with_val(prec, 1));
    }
    let x = Float::with_val(wp, x);
    let emx = Float::with_val(wp, -&x).exp();
    let cutoff_shift = -(wp as i32 + 8);
    if x < k + 1 {
        let mut term = powu(&Float::with_val(wp, &x), k + 1) / factorial(wp, k + 1);
        let mut sum = term.clone();
        let mut j = k + 1;
        loop {
            j += 1;
            term *= &x;
            term /= j;
            sum += &term;
            if term.is_zero() || term < Float::with_val(wp, &sum << cutoff_shift) {
                break;
            }
        }
        let p = Float::with_val(prec, &sum * &emx);
        let q = Float::with_val(prec, 1 - p.clone());
        (p, q)
    } else {
        let mut term = Float::with_val(wp, 1);
        let mut sum = Float::with_val(wp, 1);
        for j in 1..=k {
            term *= &x;
            term /= j;
            sum += &term;
        }
        let q = Float::with_val(prec, &sum * &emx);
        let p = Float::with_val(prec, 1 - q.clone());
        (p, q)
    }
}

/// Regularized lower incomplete gamma P(k+1, x) = γ(k+1, x)/k!.
pub fn regularized_lower_gamma(k: u32, x: &Float, prec: u32) -> Float {
    gamma_pq(k, x, prec).0
}

/// P(k+1, hi) − P(k+1, lo) without cancellation in either tail.
fn gamma_difference(k: u32, lo: &Float, hi: &Float, prec: u32) -> Float {
    let (p_lo, q_lo) = gamma_pq(k, lo, prec + GUARD_BITS);
    let (p_hi, q_hi) = gamma_pq(k, hi, prec + GUARD_BITS);
    if *lo >= k + 1 {
        Float::with_val(prec, q_lo - q_hi)
    } else {
        Float::with_val(prec, p_hi - p_lo)
    }
}

/// Average of v(|z|) against the density |z|^{2a} e^{−b|z|²/2} normalized to one.
pub fn step_average(a: u32, v: &RadialStep, b: f64, prec: u32) -> Float {
    let half_b = Float::with_val(prec + GUARD_BITS, b) / 2u32;
    let mut acc = Float::with_val(prec, 0);
    for an in v.annuli() {
        let lo = Float::with_val(prec + GUARD_BITS, an.r_lo * an.r_lo) * &half_b;
        let hi = Float::with_val(prec + GUARD_BITS, an.r_hi * an.r_hi) * &half_b;
        let mass = gamma_difference(a, &lo, &hi, prec);
        acc += Float::with_val(prec, &mass * an.value);
    }
    acc
}

/// Full Gaussian moment ∫ |z|^{2a} e^{−b|z|²/2} dm = π a! (2/b)^{a+1}.
pub fn full_gaussian_moment(a: u32, b: f64, prec: u32) -> Float {
    let two_over_b = Float::with_val(prec, 2) / Float::with_val(prec, b);
    let pw = powu(&Float::with_val(prec, &two_over_b), a + 1);
    pi(prec) * factorial(prec, a) * pw
}

/// ∫ |z|^{2a} v(|z|) e^{−b|z|²/2} dm for a radial step profile, annulus by annulus.
pub fn gaussian_moment(a: u32, v: &RadialStep, b: f64, prec: u32) -> Float {
    full_gaussian_moment(a, b, prec) * step_average(a, v, b, prec)
}

//! Arbitrary-precision scalar helpers built on MPFR floats.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const MIN_PRECISION_BITS: u32 = 64;
pub const MAX_PRECISION_BITS: u32 = 1 << 16;

pub fn check_precision(bits: u32) -> Result<u32> {
    if (MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&bits) {
        Ok(bits)
    } else {
        Err(Error::invalid(format!(
            "precision {bits} bits outside [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}]"
        )))
    }
}

pub fn float(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn factorial(prec: u32, n: u32) -> Float {
    Float::with_val(prec, Float::factorial(n))
}

pub fn powu(x: &Float, n: u32) -> Float {
    use rug::ops::Pow;
    Float::with_val(x.prec(), x.pow(n))
}

/// 2^e as a float of the given precision.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 1) << e
}

/// ln(n!) in double precision, exact summation for small n.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 256 {
        (2..=n).map(|i| (i as f64).ln()).sum()
    } else {
        let x = n as f64 + 1.0;
        // Stirling series for ln Γ(x)
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3))
    }
}

/// Decimal string carrying every significant digit of the value.
pub fn to_decimal(x: &Float) -> String {
    x.to_string_radix(10, None)
}

/// Complex number with MPFR real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        BigComplex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        BigComplex { re: -self.im.clone(), im: self.re.clone() }
    }

    /// Multiplication by −i.
    pub fn mul_neg_i(&self) -> Self {
        BigComplex { re: self.im.clone(), im: -self.re.clone() }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        BigComplex { re: self.re.clone() * s, im: self.im.clone() * s }
    }

    /// conj(self) · other.
    pub fn conj_mul(&self, other: &BigComplex) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &other.re) + Float::with_val(p, &self.im * &other.im);
        let im = Float::with_val(p, &self.re * &other.im) - Float::with_val(p, &self.im * &other.re);
        BigComplex { re, im }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn add_assign_ref(&mut self, o: &BigComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }

    pub fn sub_assign_ref(&mut self, o: &BigComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        BigComplex { re, im }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_product_matches_double() {
        let p = 128;
        let a = BigComplex::new(float(p, 1.5), float(p, -2.0));
        let b = BigComplex::new(float(p, 0.25), float(p, 3.0));
        let c = (&a * &b).to_c64();
        let e = Complex64::new(1.5, -2.0) * Complex64::new(0.25, 3.0);
        assert!((c - e).norm() < 1e-15);
        let d = a.conj_mul(&b).to_c64();
        let e = Complex64::new(1.5, 2.0) * Complex64::new(0.25, 3.0);
        assert!((d - e).norm() < 1e-15);
    }

    #[test]
    fn ln_factorial_small_and_large_agree_with_sum() {
        let direct: f64 = (2..=300u64).map(|i| (i as f64).ln()).sum();
        assert!((ln_factorial(300) - direct).abs() < 1e-9);
        assert_eq!(ln_factorial(0), 0.0);
    }

    #[test]
    fn precision_bounds() {
        assert!(check_precision(256).is_ok());
        assert!(check_precision(8).is_err());
    }
}

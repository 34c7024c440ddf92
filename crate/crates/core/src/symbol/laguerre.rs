use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Generalized Laguerre polynomial L_q^{(m)}(t) = Σ_j C(q+m, q−j) (−t)^j / j!.
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerrePoly {
    pub q: u32,
    pub m: u32,
    /// Exact coefficient of t^j, j = 0..=q.
    pub coeffs: Vec<BigRational>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

pub fn laguerre(q: u32, m: u32) -> Result<LaguerrePoly> {
    if m > 1 {
        return Err(Error::invalid(format!("Laguerre superscript must be 0 or 1, got {m}")));
    }
    let coeffs = (0..=q)
        .map(|j| {
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            BigRational::new(sign * binomial(q + m, q - j), factorial(j))
        })
        .collect();
    Ok(LaguerrePoly { q, m, coeffs })
}

impl LaguerrePoly {
    pub fn coeff_f64(&self, j: usize) -> f64 {
        self.coeffs.get(j).and_then(|c| c.to_f64()).unwrap_or(0.0)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(0.0))
    }

    /// Exact value at a rational point.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }
}

//! Basis functions φ_{k,n} as polynomials in (z, z̄) times e^{−b|z|²/4}.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rug::Float;

use super::gamma::full_gaussian_moment;
use super::{BasisIndex, MagneticParams};
use crate::error::{Error, Result};
use crate::num::{check_precision, factorial, pi, powu, BigComplex};

/// Largest k + n accepted; beyond this the coefficient exponents leave any useful range.
const MAX_TOTAL_DEGREE: u32 = 4096;

#[derive(Clone, Debug)]
pub struct LadderFunction {
    /// Coefficient of z^i z̄^j, keyed by (i, j).
    pub coeffs: BTreeMap<(u32, u32), BigComplex>,
    pub b: f64,
    pub norm_sq: Float,
    /// Basis index this function was generated from, if any.
    pub index: Option<BasisIndex>,
    prec: u32,
}

impl LadderFunction {
    pub fn from_coeffs(coeffs: BTreeMap<(u32, u32), BigComplex>, b: f64, prec: u32) -> Self {
        let mut f = LadderFunction { coeffs, b, norm_sq: Float::new(prec), index: None, prec };
        f.coeffs.retain(|_, c| !c.is_zero());
        f.norm_sq = f.inner(&f).re;
        f
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&BigComplex> {
        self.coeffs.get(&(i, j))
    }

    fn max_i(&self) -> u32 {
        self.coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    fn max_j(&self) -> u32 {
        self.coeffs.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// Largest moment index j + i' reached when pairing this function with `other`.
    pub fn max_moment_with(&self, other: &LadderFunction) -> u32 {
        self.max_j() + other.max_i()
    }

    /// Exact L² inner product ⟨self, other⟩ (antilinear in self).
    pub fn inner(&self, other: &LadderFunction) -> BigComplex {
        let prec = self.prec.max(other.prec);
        let amax = self.max_moment_with(other);
        let moments: Vec<Float> =
            (0..=amax).map(|a| full_gaussian_moment(a, self.b, prec)).collect();
        self.pair_with(other, |a| Some(&moments[a as usize]), 0)
    }

    /// Σ conj(c_ij) c'_{i'j'} w(j + i' + shift) over monomial pairs with
    /// i − j = i' + shift − j'. A shift of 1 pairs against z·other.
    pub(crate) fn pair_with<'a, F>(&self, other: &LadderFunction, weight: F, shift: u32) -> BigComplex
    where
        F: Fn(u32) -> Option<&'a Float>,
    {
        let prec = self.prec.max(other.prec);
        let mut acc = BigComplex::zero(prec);
        for (&(i, j), c) in &self.coeffs {
            let ell = i as i64 - j as i64;
            for (&(ip, jp), cp) in &other.coeffs {
                if ip as i64 + shift as i64 - jp as i64 != ell {
                    continue;
                }
                if let Some(w) = weight(j + ip + shift) {
                    let prod = c.conj_mul(cp);
                    acc.add_assign_ref(&prod.scale(w));
                }
            }
        }
        acc
    }

    pub fn scaled(&self, s: &Float) -> LadderFunction {
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k, c.scale(s))).collect();
        let norm_sq = Float::with_val(self.prec, &self.norm_sq * s) * s;
        LadderFunction { coeffs, b: self.b, norm_sq, index: self.index, prec: self.prec }
    }

    /// Value at x1 + i x2 in double precision.
    pub fn eval(&self, x1: f64, x2: f64) -> Complex64 {
        let z = Complex64::new(x1, x2);
        let zb = z.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), c) in &self.coeffs {
            acc += c.to_c64() * z.powu(i) * zb.powu(j);
        }
        acc * (-self.b * z.norm_sqr() / 4.0).exp()
    }

    /// Double-precision coefficients, for fast repeated evaluation.
    pub fn evaluator(&self) -> LadderEvaluator {
        LadderEvaluator {
            terms: self.coeffs.iter().map(|(&(i, j), c)| (i, j, c.to_c64())).collect(),
            b: self.b,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LadderEvaluator {
    terms: Vec<(u32, u32, Complex64)>,
    b: f64,
}

impl LadderEvaluator {
    pub fn eval(&self, x1: f64, x2: f64) -> Complex64 {
        let z = Complex64::new(x1, x2);
        let zb = z.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i, j, c) in &self.terms {
            acc += c * z.powu(i) * zb.powu(j);
        }
        acc * (-self.b * z.norm_sqr() / 4.0).exp()
    }
}

/// a* acting on the polynomial part: P ↦ −i(2∂_z P − b z̄ P).
pub fn ladder_raise(f: &LadderFunction) -> LadderFunction {
    let prec = f.prec;
    let mut out: BTreeMap<(u32, u32), BigComplex> = BTreeMap::new();
    for (&(i, j), c) in &f.coeffs {
        if i > 0 {
            let t = c.scale_f64(2.0 * i as f64).mul_neg_i();
            entry_add(&mut out, (i - 1, j), &t, prec);
        }
        let t = c.scale_f64(-f.b).mul_neg_i();
        entry_add(&mut out, (i, j + 1), &t, prec);
    }
    let mut g = LadderFunction::from_coeffs(out, f.b, prec);
    g.index = f.index.map(|ix| BasisIndex::new(ix.k, ix.n + 1));
    g
}

/// a acting on the polynomial part: P ↦ −2i ∂_{z̄} P.
pub fn ladder_lower(f: &LadderFunction) -> LadderFunction {
    let prec = f.prec;
    let mut out: BTreeMap<(u32, u32), BigComplex> = BTreeMap::new();
    for (&(i, j), c) in &f.coeffs {
        if j > 0 {
            let t = c.scale_f64(2.0 * j as f64).mul_neg_i();
            entry_add(&mut out, (i, j - 1), &t, prec);
        }
    }
    let mut g = LadderFunction::from_coeffs(out, f.b, prec);
    g.index = f.index.and_then(|ix| ix.n.checked_sub(1).map(|n| BasisIndex::new(ix.k, n)));
    g
}

fn entry_add(map: &mut BTreeMap<(u32, u32), BigComplex>, key: (u32, u32), v: &BigComplex, prec: u32) {
    map.entry(key).or_insert_with(|| BigComplex::zero(prec)).add_assign_ref(v);
}

/// Normalized φ_{k,n} = ((2b)^n n!)^{−1/2} (a*)^n φ_{k,0}, with
/// φ_{k,0} = √(b/(2πk!)) (b/2)^{k/2} z^k e^{−b|z|²/4}.
pub fn build_basis_function(idx: BasisIndex, p: &MagneticParams, prec: u32) -> Result<LadderFunction> {
    p.validate()?;
    check_precision(prec)?;
    if idx.k.saturating_add(idx.n) > MAX_TOTAL_DEGREE {
        return Err(Error::invalid(format!(
            "basis index (k={}, n={}) exceeds total degree {MAX_TOTAL_DEGREE} representable at {prec} bits",
            idx.k, idx.n
        )));
    }
    let b = Float::with_val(prec, p.b);
    let half_b = Float::with_val(prec, &b / 2u32);
    let seed_sq = Float::with_val(prec, &b / (pi(prec) * 2u32 * factorial(prec, idx.k)))
        * powu(&Float::with_val(prec, &half_b), idx.k);
    let mut coeffs = BTreeMap::new();
    coeffs.insert((idx.k, 0), BigComplex::real(seed_sq.sqrt()));
    let mut f = LadderFunction::from_coeffs(coeffs, p.b, prec);
    f.index = Some(BasisIndex::new(idx.k, 0));
    for _ in 0..idx.n {
        f = ladder_raise(&f);
    }
    if idx.n > 0 {
        let norm = powu(&Float::with_val(prec, &b * 2u32), idx.n) * factorial(prec, idx.n);
        f = f.scaled(&norm.sqrt().recip());
    }
    f.index = Some(idx);
    Ok(f)
}

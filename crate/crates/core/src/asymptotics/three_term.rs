//! The three-term law |ln λ|/ln₂ + |ln λ|ln₃/ln₂² + C|ln λ|/ln₂² and the
//! finite-truncation sandwich of n_+(λ) against it.

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::toeplitz::{counting, Sign, Spectrum};

/// Value of the law from L = |ln λ|; requires ln L > 1.
pub fn three_term_from_log(abs_ln: f64, c: f64) -> Result<f64> {
    let (l2, l3) = iterated_logs(abs_ln)?;
    Ok(abs_ln / l2 + abs_ln * l3 / (l2 * l2) + c * abs_ln / (l2 * l2))
}

fn iterated_logs(abs_ln: f64) -> Result<(f64, f64)> {
    let l2 = abs_ln.ln();
    if !(l2 > 1.0 && abs_ln.is_finite()) {
        return Err(Error::invalid(format!("need λ < e^(−e), i.e. |ln λ| > e; got |ln λ| = {abs_ln}")));
    }
    Ok((l2, l2.ln()))
}

/// |ln λ| for 0 < λ < 1.
pub fn abs_ln(lambda: &Float) -> Result<f64> {
    if !(*lambda > 0 && *lambda < 1) {
        return Err(Error::invalid(format!("λ must lie in (0, 1), got {}", lambda.to_f64())));
    }
    Ok(-Float::with_val(lambda.prec(), lambda.ln_ref()).to_f64())
}

/// The law at λ < e^{−e}.
pub fn three_term_value(lambda: &Float, c: f64) -> Result<f64> {
    three_term_from_log(abs_ln(lambda)?, c)
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichRow {
    pub abs_ln_lambda: f64,
    pub n_plus: usize,
    pub lower: f64,
    pub upper: f64,
    /// (n_+ − |ln λ|/ln₂ − |ln λ|ln₃/ln₂²)·ln₂²/|ln λ|.
    pub residual: f64,
    pub within: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub c_minus: f64,
    pub c_plus: f64,
    pub slack: f64,
    pub rows: Vec<SandwichRow>,
    /// False when the positive spectrum is empty.
    pub applicable: bool,
}

/// Compares n_+(λ) with the law at C_− − slack and C_+ + slack on each λ.
pub fn sandwich_report(spec: &Spectrum, c_minus: f64, c_plus: f64, lambdas: &[Float], slack: f64) -> Result<SandwichReport> {
    if c_minus > c_plus {
        return Err(Error::invalid(format!("need C_− ≤ C_+, got {c_minus} > {c_plus}")));
    }
    let mut rows = Vec::with_capacity(lambdas.len());
    for lam in lambdas {
        let l = abs_ln(lam)?;
        let (l2, l3) = iterated_logs(l)?;
        let n = counting(lam, spec, Sign::Plus)?;
        let lower = three_term_from_log(l, c_minus - slack)?;
        let upper = three_term_from_log(l, c_plus + slack)?;
        let residual = (n as f64 - l / l2 - l * l3 / (l2 * l2)) * l2 * l2 / l;
        let within = residual >= c_minus - slack && residual <= c_plus + slack;
        rows.push(SandwichRow { abs_ln_lambda: l, n_plus: n, lower, upper, residual, within });
    }
    Ok(SandwichReport { c_minus, c_plus, slack, rows, applicable: !spec.positive().is_empty() })
}

/// λ = e^{−L} at the given precision.
pub fn lambda_from_log(abs_ln: f64, prec: u32) -> Float {
    Float::with_val(prec, -abs_ln).exp()
}

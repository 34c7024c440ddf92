//! Composite Gauss-Legendre quadrature in double precision.

use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Degree of the per-panel rule.
pub const PANEL_DEGREE: usize = 20;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(PANEL_DEGREE)
            .expect("degree is at least 2")
            .into_node_weight_pairs()
    })
}

/// One Gauss-Legendre panel over [a, b].
pub fn panel<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule().iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Nodes and weights of one panel over [a, b].
pub fn panel_nodes(a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule().iter().map(|&(x, w)| (mid + half * x, w * half)).collect()
}

/// Equal-width composite rule with `panels` panels.
pub fn composite<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).map(|i| panel(a + i as f64 * h, a + (i + 1) as f64 * h, &mut f)).sum()
}

/// Doubles the panel count until two successive values agree to `tol`
/// (absolute). Returns the finer value and the last difference.
pub fn adaptive<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
    mut f: F,
) -> Result<(f64, f64)> {
    if b <= a {
        return Ok((0.0, 0.0));
    }
    let mut panels = 4;
    let mut prev = composite(a, b, panels, &mut f);
    loop {
        panels *= 2;
        let cur = composite(a, b, panels, &mut f);
        let diff = (cur - prev).abs();
        if diff <= tol {
            return Ok((cur, diff));
        }
        if panels >= max_panels {
            return Err(Error::Quadrature { achieved: diff, tolerance: tol });
        }
        prev = cur;
    }
}

//! Truncated Taylor series in one variable, used for exact radial
//! derivatives of closed-form profiles.

/// Coefficients c_i = f^{(i)}(r0)/i! for i = 0..=order.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn constant(c: f64, order: usize) -> Jet {
        let mut v = vec![0.0; order + 1];
        v[0] = c;
        Jet(v)
    }

    pub fn zero(order: usize) -> Jet {
        Jet(vec![0.0; order + 1])
    }

    /// The identity function r expanded at r0.
    pub fn variable(r0: f64, order: usize) -> Jet {
        let mut v = vec![0.0; order + 1];
        v[0] = r0;
        if order >= 1 {
            v[1] = 1.0;
        }
        Jet(v)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// n-th derivative at the expansion point.
    pub fn derivative_value(&self, n: usize) -> f64 {
        let f: f64 = (1..=n).map(|i| i as f64).product();
        self.0[n] * f
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet(self.0[..=order.min(self.order())].to_vec())
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let n = self.order().min(o.order());
        Jet((0..=n).map(|i| self.0[i] + o.0[i]).collect())
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        let n = self.order().min(o.order());
        Jet((0..=n).map(|i| self.0[i] - o.0[i]).collect())
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.order().min(o.order());
        let mut v = vec![0.0; n + 1];
        for i in 0..=n {
            for j in 0..=(n - i) {
                v[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(v)
    }

    pub fn powi(&self, p: u32) -> Jet {
        let mut acc = Jet::constant(1.0, self.order());
        for _ in 0..p {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn recip(&self) -> Jet {
        let n = self.order();
        let a0 = self.0[0];
        let mut r = vec![0.0; n + 1];
        r[0] = 1.0 / a0;
        for k in 1..=n {
            let s: f64 = (1..=k).map(|j| self.0[j] * r[k - j]).sum();
            r[k] = -s / a0;
        }
        Jet(r)
    }

    pub fn div(&self, o: &Jet) -> Jet {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Jet {
        let n = self.order();
        let mut e = vec![0.0; n + 1];
        e[0] = self.0[0].exp();
        if e[0] == 0.0 {
            return Jet(e);
        }
        for k in 1..=n {
            let s: f64 = (1..=k).map(|j| j as f64 * self.0[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Jet(e)
    }

    /// Jet of f′, one order lower.
    pub fn derivative(&self) -> Jet {
        if self.order() == 0 {
            return Jet(vec![0.0]);
        }
        Jet((1..=self.order()).map(|i| i as f64 * self.0[i]).collect())
    }

    /// Jet of a function whose derivative is `self`, with value c0 at the expansion point.
    pub fn integral(&self, c0: f64) -> Jet {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(c0);
        v.extend(self.0.iter().enumerate().map(|(i, c)| c / (i + 1) as f64));
        Jet(v)
    }

    /// Substitution r = s·ρ: rescales the expansion variable.
    pub fn rescale(&self, s: f64) -> Jet {
        let mut f = 1.0;
        Jet(self
            .0
            .iter()
            .map(|c| {
                let out = c * f;
                f *= s;
                out
            })
            .collect())
    }

    /// Radial Laplacian f″ + f′/r for a jet expanded at r0, two orders lower.
    /// At r0 = 0 the quotient f′/r is taken as the shifted series, which is
    /// exact for profiles smooth in the plane (f′(0) = 0).
    pub fn radial_laplacian(&self, r0: f64) -> Jet {
        assert!(self.order() >= 2, "radial Laplacian needs a jet of order >= 2");
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let quotient = if r0 == 0.0 {
            Jet(d1.0[1..].to_vec())
        } else {
            d1.div(&Jet::variable(r0, d1.order()))
        };
        d2.add(&quotient.truncate(d2.order()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_square() {
        // exp(-r²) at r0 = 0.7: compare derivatives with closed form
        let r0: f64 = 0.7;
        let x = Jet::variable(r0, 4);
        let e = x.mul(&x).scale(-1.0).exp();
        let f = (-r0 * r0).exp();
        assert!((e.value() - f).abs() < 1e-15);
        assert!((e.derivative_value(1) - (-2.0 * r0 * f)).abs() < 1e-14);
        assert!((e.derivative_value(2) - (4.0 * r0 * r0 - 2.0) * f).abs() < 1e-14);
    }

    #[test]
    fn laplacian_of_r_squared_is_four() {
        for r0 in [0.0, 0.5, 2.0] {
            let x = Jet::variable(r0, 4);
            let l = x.mul(&x).radial_laplacian(r0);
            assert!((l.value() - 4.0).abs() < 1e-13);
        }
    }

    #[test]
    fn laplacian_of_r_fourth() {
        // Δ r⁴ = 16 r²
        let r0 = 1.3;
        let x = Jet::variable(r0, 6);
        let l = x.powi(4).radial_laplacian(r0);
        assert!((l.value() - 16.0 * r0 * r0).abs() < 1e-12);
        let l2 = l.radial_laplacian(r0);
        assert!((l2.value() - 64.0).abs() < 1e-11);
    }

    #[test]
    fn recip_roundtrip() {
        let x = Jet::variable(1.7, 5).add(&Jet::constant(0.2, 5));
        let p = x.mul(&x.recip());
        assert!((p.value() - 1.0).abs() < 1e-15);
        for c in &p.0[1..] {
            assert!(c.abs() < 1e-14);
        }
    }
}

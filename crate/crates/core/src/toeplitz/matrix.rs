use rug::Float;

use crate::num::BigComplex;

/// Dense Hermitian matrix with MPFR complex entries. Setting (i, j) also sets
/// (j, i) to the conjugate, so the symmetry is exact.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    dim: usize,
    prec: u32,
    entries: Vec<BigComplex>,
    /// Largest absolute error estimate of any assembled entry.
    pub assembly_error: f64,
    pub provenance: String,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize, prec: u32) -> Self {
        HermitianMatrix {
            dim,
            prec,
            entries: vec![BigComplex::zero(prec); dim * dim],
            assembly_error: 0.0,
            provenance: String::new(),
        }
    }

    pub fn from_real_diagonal(diag: &[Float], prec: u32) -> Self {
        let mut h = HermitianMatrix::zeros(diag.len(), prec);
        for (i, d) in diag.iter().enumerate() {
            h.set(i, i, BigComplex::real(Float::with_val(prec, d)));
        }
        h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = p.into();
        self
    }

    pub fn get(&self, i: usize, j: usize) -> &BigComplex {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigComplex) {
        if i == j {
            let re = Float::with_val(self.prec, &v.re);
            self.entries[i * self.dim + i] = BigComplex::real(re);
        } else {
            let v = BigComplex::new(Float::with_val(self.prec, &v.re), Float::with_val(self.prec, &v.im));
            self.entries[j * self.dim + i] = v.conj();
            self.entries[i * self.dim + j] = v;
        }
    }

    /// self += s·other.
    pub fn add_scaled(&mut self, other: &HermitianMatrix, s: &Float) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_assign_ref(&b.scale(s));
        }
        let s = s.to_f64().abs();
        self.assembly_error += s * other.assembly_error;
    }

    pub fn scaled(&self, s: &Float) -> HermitianMatrix {
        let mut out = HermitianMatrix::zeros(self.dim, self.prec);
        out.add_scaled(self, s);
        out.provenance = self.provenance.clone();
        out
    }

    pub fn frobenius_norm(&self) -> Float {
        let mut acc = Float::with_val(self.prec, 0);
        for e in &self.entries {
            acc += e.norm_sqr();
        }
        acc.sqrt()
    }

    pub fn is_exactly_hermitian(&self) -> bool {
        (0..self.dim).all(|i| {
            self.get(i, i).im.is_zero()
                && (i + 1..self.dim).all(|j| *self.get(i, j) == self.get(j, i).conj())
        })
    }

    /// Index sets of the connected components of the off-diagonal sparsity graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < comp.len() {
                let i = comp[head];
                head += 1;
                for j in 0..n {
                    if !seen[j] && !self.get(i, j).is_zero() {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn submatrix(&self, idx: &[usize]) -> HermitianMatrix {
        let mut out = HermitianMatrix::zeros(idx.len(), self.prec);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.entries[a * idx.len() + b] = self.get(i, j).clone();
            }
        }
        out.assembly_error = self.assembly_error;
        out
    }

    pub fn mul_vec(&self, x: &[BigComplex]) -> Vec<BigComplex> {
        (0..self.dim)
            .map(|i| {
                let mut acc = BigComplex::zero(self.prec);
                for (j, xj) in x.iter().enumerate() {
                    acc.add_assign_ref(&(self.get(i, j) * xj));
                }
                acc
            })
            .collect()
    }

    pub fn to_c64(&self) -> Vec<Vec<num_complex::Complex64>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j).to_c64()).collect()).collect()
    }
}

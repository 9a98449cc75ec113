//! Exponential sums `f(t) = sum_j c_j exp(a_j t)` on `[0, d]` with exact
//! integrals. Vector-valued coefficients carry spinor components.

use super::{c, Complex64};

/// `int_0^d exp(beta t) dt`, with a series near `beta = 0`.
pub fn exp_integral(beta: Complex64, d: f64) -> Complex64 {
    let x = beta * d;
    if x.norm() < 1e-4 {
        d * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0)
    } else {
        (x.exp() - 1.0) / beta
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    pub rate: Complex64,
    pub coeff: Vec<Complex64>,
}

/// Vector-valued exponential sum on the local interval `[0, d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum {
    pub dim: usize,
    pub terms: Vec<ExpTerm>,
}

impl ExpSum {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn term(rate: Complex64, coeff: Vec<Complex64>) -> Self {
        Self { dim: coeff.len(), terms: vec![ExpTerm { rate, coeff }] }
    }

    /// Scalar `a * exp(rate t)`.
    pub fn scalar(rate: Complex64, a: Complex64) -> Self {
        Self::term(rate, vec![a])
    }

    pub fn add(&mut self, other: &ExpSum) {
        assert_eq!(self.dim, other.dim);
        self.terms.extend(other.terms.iter().cloned());
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { rate: t.rate, coeff: t.coeff.iter().map(|x| x * s).collect() })
                .collect(),
        }
    }

    pub fn eval(&self, t: f64) -> Vec<Complex64> {
        let mut out = vec![c(0.0, 0.0); self.dim];
        for term in &self.terms {
            let e = (term.rate * t).exp();
            for (o, x) in out.iter_mut().zip(&term.coeff) {
                *o += x * e;
            }
        }
        out
    }

    /// Derivative in `t`.
    pub fn derivative(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { rate: t.rate, coeff: t.coeff.iter().map(|x| x * t.rate).collect() })
                .collect(),
        }
    }

    /// `int_0^d <f(t), g(t)> dt` with the inner product linear in `f`.
    pub fn inner(&self, other: &ExpSum, d: f64) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        let mut acc = c(0.0, 0.0);
        for a in &self.terms {
            for b in &other.terms {
                let w: Complex64 = a.coeff.iter().zip(&b.coeff).map(|(x, y)| x * y.conj()).sum();
                if w != c(0.0, 0.0) {
                    acc += w * exp_integral(a.rate + b.rate.conj(), d);
                }
            }
        }
        acc
    }

    /// Picks component `k` as a scalar sum.
    pub fn component(&self, k: usize) -> Self {
        Self { dim: 1, terms: self.terms.iter().map(|t| ExpTerm { rate: t.rate, coeff: vec![t.coeff[k]] }).collect() }
    }
}

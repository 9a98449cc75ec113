//! Finite sandbox for triples built from a bounded inverse `A0inv`, an
//! injective boundary map `G` and a Hermitian `E`.
//!
//! The triple lives on `A_* = {(A0inv f' + G phi, f')}` with
//! `Gamma_0 = phi` and `Gamma_1 = G* f' + E phi`. Its Weyl function is
//! `M(lambda) = E + lambda G* (I - lambda A0inv)^{-1} G`.

use crate::error::{Error, Result};
use crate::krein::{FiniteTriple, Subspace};
use crate::numerics::{
    identity, imaginary_part, inverse, max_abs, null_space_with, operator_norm, orth, psd_check,
    smallest_singular_value, zeros, Complex64, ComplexMatrix, PsdReport, Tolerance, RANK_CUTOFF,
};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RyzhovTriple {
    #[serde(rename = "A0inv", with = "crate::numerics::json")]
    a0inv: ComplexMatrix,
    #[serde(rename = "G", with = "crate::numerics::json")]
    g: ComplexMatrix,
    #[serde(rename = "E", with = "crate::numerics::json")]
    e: ComplexMatrix,
}

fn hermitian_residual(a: &ComplexMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut a = zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                Complex64::new(rng.gen_range(-1.0..1.0), 0.0)
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    a
}

fn random_complex<R: Rng>(r: usize, c: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(r, c, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Sign constraints for random instances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RandomOptions {
    /// Draw `A0inv` positive definite (so `A_0 >= 0`).
    pub positive_a0: bool,
    /// Draw `E <= 0`.
    pub nonpositive_e: bool,
}

impl RyzhovTriple {
    pub fn new(a0inv: ComplexMatrix, g: ComplexMatrix, e: ComplexMatrix) -> Result<Self> {
        let m = crate::numerics::check_square(&a0inv)?;
        let h = crate::numerics::check_square(&e)?;
        if g.shape() != (m, h) {
            return Err(Error::DimensionMismatch { expected: m * h, found: g.nrows() * g.ncols() });
        }
        if h > m {
            return Err(Error::InvalidInput("boundary dimension exceeds state dimension".into()));
        }
        for x in [&a0inv, &e] {
            let residual = hermitian_residual(x);
            if residual > 1e-12 * operator_norm(x).max(1.0) {
                return Err(Error::NotHermitian { residual });
            }
        }
        for x in [&a0inv, &g] {
            let sigma_min = smallest_singular_value(x);
            if sigma_min <= RANK_CUTOFF * operator_norm(x) {
                return Err(Error::Singular { sigma_min });
            }
        }
        Ok(Self { a0inv, g, e })
    }

    pub fn random<R: Rng>(m: usize, h: usize, opts: RandomOptions, rng: &mut R) -> Self {
        loop {
            let mut a = random_hermitian(m, rng);
            if opts.positive_a0 {
                a = &a * a.adjoint() + identity(m) * Complex64::new(0.1, 0.0);
            }
            let g = random_complex(m, h, rng);
            let mut e = random_hermitian(h, rng);
            if opts.nonpositive_e {
                e = -(&e * e.adjoint());
            }
            if let Ok(t) = Self::new(a, g, e) {
                if smallest_singular_value(&t.a0inv) > 1e-2 && smallest_singular_value(&t.g) > 1e-2 {
                    return t;
                }
            }
        }
    }

    pub fn state_dim(&self) -> usize {
        self.a0inv.nrows()
    }

    pub fn boundary_dim(&self) -> usize {
        self.e.nrows()
    }

    pub fn a0inv(&self) -> &ComplexMatrix {
        &self.a0inv
    }

    pub fn g(&self) -> &ComplexMatrix {
        &self.g
    }

    pub fn e(&self) -> &ComplexMatrix {
        &self.e
    }

    /// `(I - lambda A0inv)^{-1}`
    fn shifted_inverse(&self, lambda: Complex64) -> Result<ComplexMatrix> {
        let m = self.state_dim();
        let b = identity(m) - &self.a0inv * lambda;
        let s = smallest_singular_value(&b);
        if s <= 1e-12 * operator_norm(&b).max(1.0) {
            return Err(Error::ResolventPole { lambda });
        }
        inverse(&b).map_err(|_| Error::ResolventPole { lambda })
    }

    /// `gamma(lambda) = (I - lambda A0inv)^{-1} G`
    pub fn gamma(&self, lambda: Complex64) -> Result<ComplexMatrix> {
        Ok(self.shifted_inverse(lambda)? * &self.g)
    }

    /// `M_0(lambda) = lambda G* (I - lambda A0inv)^{-1} G`
    pub fn m0(&self, lambda: Complex64) -> Result<ComplexMatrix> {
        Ok(self.g.adjoint() * self.gamma(lambda)? * lambda)
    }

    pub fn weyl(&self, lambda: Complex64) -> Result<ComplexMatrix> {
        Ok(&self.e + self.m0(lambda)?)
    }

    /// Weyl function of the transposed triple for `E = 0`: `-M_0(lambda)^{-1}`.
    pub fn tilde_weyl(&self, lambda: Complex64) -> Result<ComplexMatrix> {
        if lambda == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroLambda);
        }
        Ok(-inverse(&self.m0(lambda)?)?)
    }

    /// The triple as a subspace of `C^{2m} (+) C^{2h}`, parametrized by `(f', phi)`.
    pub fn to_finite_triple(&self) -> FiniteTriple {
        let (m, h) = (self.state_dim(), self.boundary_dim());
        let f = crate::numerics::hstack(&[&self.a0inv, &self.g]);
        let fp = crate::numerics::hstack(&[&identity(m), &zeros(m, h)]);
        let g0 = crate::numerics::hstack(&[&zeros(h, m), &identity(h)]);
        let g1 = crate::numerics::hstack(&[&self.g.adjoint(), &self.e]);
        FiniteTriple::from_columns(&f, &fp, &g0, &g1).expect("shapes are consistent")
    }

    /// Block decomposition of `A0inv` over `ran G (+) (ran G)^perp` and the Schur complement
    /// `S_0(lambda) = A_11 - 1/lambda - A_21* (A_22 - 1/lambda)^{-1} A_21`.
    pub fn schur_renormalize(&self, lambda: Complex64) -> Result<SchurData> {
        if lambda == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroLambda);
        }
        let m = self.state_dim();
        let range = if orth(&self.g).ncols() == m { identity(m) } else { orth(&self.g) };
        let complement = null_space_with(&range.adjoint(), 1.0);
        let a11 = range.adjoint() * &self.a0inv * &range;
        let a21 = complement.adjoint() * &self.a0inv * &range;
        let a22 = complement.adjoint() * &self.a0inv * &complement;
        let inv_l = Complex64::new(1.0, 0.0) / lambda;
        let mut s0 = &a11 - identity(a11.nrows()) * inv_l;
        if complement.ncols() > 0 {
            let shifted = &a22 - identity(a22.nrows()) * inv_l;
            let inner = inverse(&shifted).map_err(|_| Error::ResolventPole { lambda })?;
            s0 -= a21.adjoint() * inner * &a21;
        }
        let g_coords = range.adjoint() * &self.g;
        Ok(SchurData { range_basis: range, complement_basis: complement, a11, a21, a22, s0, g_coords })
    }

    /// Largest principal angles between the ranges at `lambda` and `mu` of
    /// `(I - z A0inv)^{-1} G` and of its compression `P_G (I - z A0inv)^{-1} G`.
    pub fn domain_invariance_probe(&self, lambda: Complex64, mu: Complex64) -> Result<DomainProbe> {
        let pg = orth(&self.g);
        let p = &pg * pg.adjoint();
        let (gl, gm) = (self.gamma(lambda)?, self.gamma(mu)?);
        let unprojected_angle = Subspace::span(&gl).largest_angle(&Subspace::span(&gm));
        let projected_angle = Subspace::span(&(&p * &gl)).largest_angle(&Subspace::span(&(&p * &gm)));
        Ok(DomainProbe { unprojected_angle, projected_angle })
    }

    /// `A_Theta` for a Hermitian `theta`, as a relation in `C^m`.
    pub fn extension(&self, theta: &ComplexMatrix) -> Result<Subspace> {
        self.to_finite_triple().extension(&Subspace::graph(theta))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurData {
    /// Orthonormal basis of `ran G` (the identity when `G` is onto).
    pub range_basis: ComplexMatrix,
    pub complement_basis: ComplexMatrix,
    pub a11: ComplexMatrix,
    pub a21: ComplexMatrix,
    pub a22: ComplexMatrix,
    /// Schur complement in the coordinates of `range_basis`.
    pub s0: ComplexMatrix,
    /// `G` in the coordinates of `range_basis`; `S_0 = g_coords * M~ * g_coords*`.
    pub g_coords: ComplexMatrix,
}

impl SchurData {
    /// Reports whether `Im S_0 >= 0` at the sampled point; the class is not assumed.
    pub fn nevanlinna_sample(&self, tol: Tolerance) -> Result<PsdReport> {
        psd_check(&imaginary_part(&self.s0)?, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainProbe {
    pub unprojected_angle: f64,
    pub projected_angle: f64,
}

/// Dense relation for `A_0`: graph of `A0inv^{-1}`.
pub fn a0_matrix(t: &RyzhovTriple) -> Result<ComplexMatrix> {
    inverse(t.a0inv())
}

/// Builds the triple from its JSON form.
pub fn from_json(s: &str) -> Result<RyzhovTriple> {
    let t: RyzhovTriple = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
    RyzhovTriple::new(t.a0inv, t.g, t.e)
}

//! Subspaces of `C^n` held by an orthonormal basis, and linear relations
//! stored as subspaces of `C^n (+) C^n`.

use crate::error::{Error, Result};
use crate::numerics::{
    hstack, identity, null_space, null_space_with, operator_norm, orth, smallest_singular_value, vstack, zeros,
    ComplexMatrix, SUBSPACE_ANGLE_TOL,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl Subspace {
    /// Column span of `m`.
    pub fn span(m: &ComplexMatrix) -> Self {
        Self { basis: orth(m) }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { basis: zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { basis: identity(ambient) }
    }

    /// Graph `{(x, A x)}` of a matrix.
    pub fn graph(a: &ComplexMatrix) -> Self {
        Self::span(&vstack(&[&identity(a.ncols()), a]))
    }

    /// Relation `{(x, y) : C0 x + C1 y = 0}`.
    pub fn kernel_relation(c0: &ComplexMatrix, c1: &ComplexMatrix) -> Self {
        Self { basis: null_space(&hstack(&[c0, c1])) }
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn complement(&self) -> Self {
        if self.dim() == 0 {
            return Self::full(self.ambient_dim());
        }
        Self { basis: null_space_with(&self.basis.adjoint(), 1.0) }
    }

    /// Rows whose kernel is this subspace.
    pub fn annihilator(&self) -> ComplexMatrix {
        self.complement().basis.adjoint()
    }

    /// Sine of the largest principal angle from `self` into `other`.
    fn containment_gap(&self, other: &Self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let resid = &self.basis - &other.basis * (other.basis.adjoint() * &self.basis);
        operator_norm(&resid).min(1.0)
    }

    /// Largest principal angle; `pi/2` when the dimensions differ.
    pub fn largest_angle(&self, other: &Self) -> f64 {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        if self.dim() != other.dim() {
            return std::f64::consts::FRAC_PI_2;
        }
        self.containment_gap(other).asin()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.largest_angle(other) <= SUBSPACE_ANGLE_TOL
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dim() <= other.dim() && self.containment_gap(other) <= SUBSPACE_ANGLE_TOL
    }

    /// Distance from a vector to the subspace, relative to the vector norm.
    pub fn relative_distance(&self, v: &ComplexMatrix) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        (v - &self.basis * (self.basis.adjoint() * v)).norm() / n
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(&hstack(&[&self.basis, &other.basis]))
    }

    /// Image under a linear map.
    pub fn image(&self, a: &ComplexMatrix) -> Self {
        Self::span(&(a * &self.basis))
    }
}

/// View of a subspace of `C^n (+) C^n` as a linear relation in `C^n`.
pub trait Relation {
    fn half(&self) -> usize;
    fn first(&self) -> ComplexMatrix;
    fn second(&self) -> ComplexMatrix;
    /// `S* = {(g, g') : (f', g) = (f, g') for all (f, f') in S}`.
    fn relation_adjoint(&self) -> Subspace;
    fn relation_inverse(&self) -> Subspace;
    fn is_symmetric_relation(&self) -> bool;
    fn is_selfadjoint_relation(&self) -> bool;
    /// Multivalued part `{f' : (0, f') in S}`.
    fn mul_part(&self) -> Subspace;
    /// The matrix `B` with `S = graph B`, when `S` is the graph of an everywhere defined operator.
    fn operator_part(&self) -> Option<ComplexMatrix>;
    /// Resolvent `(S - x)^{-1}` as a matrix, when `x` is a regular point.
    fn resolvent(&self, x: num_complex::Complex64) -> Result<ComplexMatrix>;
}

impl Relation for Subspace {
    fn half(&self) -> usize {
        self.ambient_dim() / 2
    }

    fn first(&self) -> ComplexMatrix {
        self.basis.rows(0, self.half()).into_owned()
    }

    fn second(&self) -> ComplexMatrix {
        let n = self.half();
        self.basis.rows(n, n).into_owned()
    }

    fn relation_adjoint(&self) -> Subspace {
        let n = self.half();
        let perp = self.complement();
        let u = perp.basis.rows(0, n).into_owned();
        let w = perp.basis.rows(n, n).into_owned();
        // (u, w) in S^perp  <=>  (g, g') = (w, -u) in S*.
        Subspace::span(&vstack(&[&w, &(-u)]))
    }

    fn relation_inverse(&self) -> Subspace {
        Subspace::span(&vstack(&[&self.second(), &self.first()]))
    }

    fn is_symmetric_relation(&self) -> bool {
        self.is_subset_of(&self.relation_adjoint())
    }

    fn is_selfadjoint_relation(&self) -> bool {
        self.approx_eq(&self.relation_adjoint())
    }

    fn mul_part(&self) -> Subspace {
        let k = null_space_with(&self.first(), 1.0);
        if k.ncols() == 0 {
            return Subspace::zero(self.half());
        }
        Subspace::span(&(self.second() * k))
    }

    fn operator_part(&self) -> Option<ComplexMatrix> {
        let n = self.half();
        if self.dim() != n {
            return None;
        }
        let x = self.first();
        if smallest_singular_value(&x) <= 1e-11 * operator_norm(&x).max(1.0) {
            return None;
        }
        crate::numerics::inverse(&x).ok().map(|xi| self.second() * xi)
    }

    fn resolvent(&self, x: num_complex::Complex64) -> Result<ComplexMatrix> {
        let n = self.half();
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        let f = self.first();
        let d = self.second() - &f * x;
        let di = crate::numerics::inverse(&d).map_err(|_| Error::EigenvalueHit { lambda: x })?;
        Ok(f * di)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, r, real_matrix, rel_diff};

    #[test]
    fn angle_between_lines() {
        let a = Subspace::span(&real_matrix(2, 1, &[1.0, 0.0]));
        let b = Subspace::span(&real_matrix(2, 1, &[1.0, 1.0]));
        assert!((a.largest_angle(&b) - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(a.approx_eq(&a.clone()));
    }

    #[test]
    fn hermitian_graph_is_selfadjoint() {
        let h = ComplexMatrix::from_fn(3, 3, |i, j| if i == j { r(i as f64) } else { c(0.5, (i as f64) - (j as f64)) });
        let g = Subspace::graph(&h);
        assert!(g.is_selfadjoint_relation());
        let nonh = ComplexMatrix::from_fn(3, 3, |i, j| r((i * 3 + j) as f64));
        assert!(!Subspace::graph(&nonh).is_selfadjoint_relation());
    }

    #[test]
    fn multivalued_relation_parts() {
        // {0} x C^1 in C^1 is selfadjoint and purely multivalued.
        let s = Subspace::span(&real_matrix(2, 1, &[0.0, 1.0]));
        assert!(s.is_selfadjoint_relation());
        assert_eq!(s.mul_part().dim(), 1);
        assert!(s.operator_part().is_none());
    }

    #[test]
    fn relation_resolvent_of_graph() {
        let h = real_matrix(2, 2, &[2.0, 1.0, 1.0, -1.0]);
        let x = c(0.3, 0.7);
        let res = Subspace::graph(&h).resolvent(x).unwrap();
        let direct = crate::numerics::inverse(&(&h - crate::numerics::identity(2) * x)).unwrap();
        assert!(rel_diff(&res, &direct) < 1e-13);
    }
}

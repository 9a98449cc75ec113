//! Dense complex linear algebra and scalar helpers used throughout the crate.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Decompositions (SVD, Hermitian
//! eigen, LU) come from nalgebra; this module adds the tolerance conventions,
//! rank decisions and the error mapping the rest of the crate relies on.

mod expsum;
pub mod json;
mod roots;
pub mod trig;

pub use expsum::{exp_integral, ExpSum, ExpTerm};
pub use roots::{bracket_roots, Advisory, Root, RootScan};

use crate::error::{Error, Result};
use nalgebra::DMatrix;
pub use num_complex::Complex64;

pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_CUTOFF: f64 = 1e-11;
/// Largest principal angle below which two subspaces count as equal.
pub const SUBSPACE_ANGLE_TOL: f64 = 1e-10;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Absolute/relative tolerance pair; the effective threshold is `abs + rel * scale`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !(abs >= 0.0 && rel >= 0.0) || (abs == 0.0 && rel == 0.0) {
            return Err(Error::InvalidTolerance);
        }
        Ok(Self { abs, rel })
    }

    /// Defaults for positive-semidefinite checks.
    pub const fn psd() -> Self {
        Self { abs: 1e-10, rel: 1e-12 }
    }

    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::psd()
    }
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(r, c)
}

/// Builds a matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| r(data[i * cols + j]))
}

pub fn from_rows(rows: &[&[Complex64]]) -> ComplexMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    ComplexMatrix::from_fn(n, m, |i, j| rows[i][j])
}

pub fn check_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    Ok(a.nrows())
}

pub fn check_same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch { expected: a.nrows() * a.ncols(), found: b.nrows() * b.ncols() });
    }
    Ok(())
}

/// `(A + A*) / 2`
pub fn hermitian_part(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square(a)?;
    Ok((a + a.adjoint()) * r(0.5))
}

/// `(A - A*) / 2i`, the Hermitian matrix `Im A`.
pub fn imaginary_part(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square(a)?;
    Ok((a - a.adjoint()) * c(0.0, -0.5))
}

/// Singular values in non-increasing order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Spectral norm; zero for empty matrices.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    match a.shape() {
        (0, _) | (_, 0) => 0.0,
        (1, 1) => a[(0, 0)].norm(),
        _ => singular_values(a)[0],
    }
}

pub fn smallest_singular_value(a: &ComplexMatrix) -> f64 {
    match a.shape() {
        (0, _) | (_, 0) => 0.0,
        (1, 1) => a[(0, 0)].norm(),
        _ => *singular_values(a).last().unwrap(),
    }
}

/// Largest absolute entry.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = check_square(h)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let sym = hermitian_part(h)?;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    Ok(ev)
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub threshold: f64,
    pub is_psd: bool,
}

/// Decides `H >= -tol` for a Hermitian `H`.
pub fn psd_check(h: &ComplexMatrix, tol: Tolerance) -> Result<PsdReport> {
    check_square(h)?;
    let scale = operator_norm(h);
    let threshold = tol.threshold(scale);
    let residual = max_abs(&(h - h.adjoint()));
    if residual > threshold {
        return Err(Error::NotHermitian { residual });
    }
    let ev = hermitian_eigenvalues(h)?;
    let min_eigenvalue = ev.first().copied().unwrap_or(0.0);
    Ok(PsdReport { min_eigenvalue, threshold, is_psd: min_eigenvalue >= -threshold })
}

pub fn det(a: &ComplexMatrix) -> Result<Complex64> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(r(1.0));
    }
    Ok(a.clone().lu().determinant())
}

fn singular_check(a: &ComplexMatrix) -> Result<()> {
    let s = singular_values(a);
    let (max, min) = (s[0], *s.last().unwrap());
    if !(min > 1e-14 * max) || !min.is_finite() {
        return Err(Error::Singular { sigma_min: min });
    }
    Ok(())
}

/// Inverse of a square matrix; `Singular` when the condition number exceeds 1e14.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(zeros(0, 0));
    }
    singular_check(a)?;
    a.clone().try_inverse().ok_or(Error::Singular { sigma_min: 0.0 })
}

/// Solves `A X = B` for square `A`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = check_square(a)?;
    if b.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.nrows() });
    }
    if n == 0 {
        return Ok(zeros(0, b.ncols()));
    }
    singular_check(a)?;
    a.clone().lu().solve(b).ok_or(Error::Singular { sigma_min: 0.0 })
}

/// Moore-Penrose pseudo-inverse with the global rank cutoff.
pub fn pseudo_inverse(a: &ComplexMatrix) -> ComplexMatrix {
    if a.is_empty() {
        return zeros(a.ncols(), a.nrows());
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let mut out = zeros(a.ncols(), a.nrows());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > RANK_CUTOFF * smax && s > 0.0 {
            let uk = u.column(k);
            let vk = vt.row(k).adjoint();
            out += vk * uk.adjoint() * r(1.0 / s);
        }
    }
    out
}

/// Orthonormal basis of the column span, rank decided by `RANK_CUTOFF`.
pub fn orth(a: &ComplexMatrix) -> ComplexMatrix {
    if a.is_empty() {
        return zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return zeros(a.nrows(), 0);
    }
    let u = svd.u.unwrap();
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > RANK_CUTOFF * smax).collect();
    ComplexMatrix::from_fn(a.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Orthonormal basis of `ker A`, rank decided relative to the largest singular value.
pub fn null_space(a: &ComplexMatrix) -> ComplexMatrix {
    null_space_with(a, 0.0)
}

/// Orthonormal basis of `ker A` with cutoff `RANK_CUTOFF * max(sigma_max, scale)`.
///
/// Blocks cut out of an orthonormal basis should pass `scale = 1` so that a
/// block that is zero up to rounding is recognised as zero.
pub fn null_space_with(a: &ComplexMatrix, scale: f64) -> ComplexMatrix {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return zeros(0, 0);
    }
    if rows == 0 {
        return identity(cols);
    }
    // Pad to at least square so the SVD returns a full right basis.
    let padded = if rows < cols {
        let mut p = zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s)).max(scale);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| smax == 0.0 || svd.singular_values[k] <= RANK_CUTOFF * smax)
        .collect();
    ComplexMatrix::from_fn(cols, keep.len(), |i, j| vt[(keep[j], i)].conj())
}

/// Block-diagonal assembly.
pub fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut i, mut j) = (0, 0);
    for b in blocks {
        out.view_mut((i, j), b.shape()).copy_from(b);
        i += b.nrows();
        j += b.ncols();
    }
    out
}

/// Stacks matrices with equal column counts on top of each other.
pub fn vstack(parts: &[&ComplexMatrix]) -> ComplexMatrix {
    let cols = parts.first().map_or(0, |p| p.ncols());
    let rows = parts.iter().map(|p| p.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut i = 0;
    for p in parts {
        assert_eq!(p.ncols(), cols, "vstack column mismatch");
        out.view_mut((i, 0), p.shape()).copy_from(p);
        i += p.nrows();
    }
    out
}

/// Places matrices with equal row counts side by side.
pub fn hstack(parts: &[&ComplexMatrix]) -> ComplexMatrix {
    let rows = parts.first().map_or(0, |p| p.nrows());
    let cols = parts.iter().map(|p| p.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut j = 0;
    for p in parts {
        assert_eq!(p.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, j), p.shape()).copy_from(p);
        j += p.ncols();
    }
    out
}

/// Relative difference `|a - b| / max(1, |a|, |b|)` in the max-entry norm.
pub fn rel_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let scale = 1f64.max(max_abs(a)).max(max_abs(b));
    max_abs(&(a - b)) / scale
}

/// Fixed 25-point sample of the open upper half-plane.
pub fn upper_half_plane_grid() -> Vec<Complex64> {
    let re = [-10.0, -1.0, 0.0, 1.5, 8.0];
    let im = [0.05, 0.3, 1.0, 4.0, 20.0];
    re.iter().flat_map(|&x| im.iter().map(move |&y| c(x, y))).collect()
}

/// Principal square root with `Im >= 0` (branch cut along the positive real axis).
pub fn sqrt_upper(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imaginary_part_of_diagonal() {
        let a = from_rows(&[&[c(1.0, 2.0), r(0.0)], &[r(0.0), c(-3.0, 5.0)]]);
        let im = imaginary_part(&a).unwrap();
        assert!((im[(0, 0)] - r(2.0)).norm() < 1e-15);
        assert!((im[(1, 1)] - r(5.0)).norm() < 1e-15);
    }

    #[test]
    fn psd_flags_negative_direction() {
        let h = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1e-3]);
        assert!(!psd_check(&h, Tolerance::psd()).unwrap().is_psd);
        let h = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1e-12]);
        assert!(psd_check(&h, Tolerance::psd()).unwrap().is_psd);
    }

    #[test]
    fn psd_rejects_non_hermitian() {
        let h = real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(psd_check(&h, Tolerance::psd()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 1.0).is_err());
        assert!(Tolerance::new(0.0, 1e-3).is_ok());
    }

    #[test]
    fn inverse_rejects_singular() {
        let a = real_matrix(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(inverse(&a), Err(Error::Singular { .. })));
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = real_matrix(1, 3, &[1.0, 1.0, 0.0]);
        let n = null_space(&a);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&a * &n)) < 1e-14);
        assert!(rel_diff(&(n.adjoint() * &n), &identity(2)) < 1e-14);
    }

    #[test]
    fn orth_drops_dependent_columns() {
        let a = real_matrix(3, 3, &[1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 1.0]);
        assert_eq!(orth(&a).ncols(), 2);
    }

    #[test]
    fn pseudo_inverse_of_rank_one() {
        let a = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let p = pseudo_inverse(&a);
        assert!(rel_diff(&(&a * &p * &a), &a) < 1e-14);
    }

    #[test]
    fn sqrt_upper_half_plane() {
        assert!((sqrt_upper(r(-1.0)) - I).norm() < 1e-15);
        assert!((sqrt_upper(r(4.0)) - r(2.0)).norm() < 1e-15);
        assert!(sqrt_upper(c(1.0, -1e-3)).im > 0.0);
    }
}

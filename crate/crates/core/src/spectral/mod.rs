//! Point-interaction realizations on a truncated lattice: boundary conditions
//! in the direct-sum boundary coordinates, eigenvalue scans and the resolvent
//! of the realization.

mod oracle;
mod resolvent;

pub use oracle::shooting_oracle;
pub use resolvent::{a0_resolvent, krein_resolvent_apply, krein_resolvent_element, pieces_inner};

use crate::error::{Error, Result};
use crate::krein::Subspace;
use crate::lattice::LatticeSpec;
use crate::models::{boundary_maps, transfer, ModelKind};
use crate::numerics::{
    bracket_roots, c, det, identity, inverse, max_abs, operator_norm, solve, zeros, Advisory, Complex64, ComplexMatrix,
    Tolerance, I,
};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Selfadjoint condition imposed at the two outer ends of the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cutoff {
    /// `f(0) = f(x_N) = 0` (Schroedinger).
    #[serde(alias = "dirichlet")]
    DirichletEnd,
    /// `f'(0) = f'(x_N) = 0` (Schroedinger).
    #[serde(alias = "neumann")]
    NeumannEnd,
    /// `f_1(0) = 0` and `f_2(x_N) = 0` (Dirac).
    #[serde(alias = "hard_wall")]
    DiracHardWall,
    /// `f(0) = f(x_N)` (momentum).
    Periodic,
}

impl Cutoff {
    fn check(&self, model: ModelKind) -> Result<()> {
        let ok = matches!(
            (self, model),
            (Cutoff::DirichletEnd | Cutoff::NeumannEnd, ModelKind::Schroedinger)
                | (Cutoff::DiracHardWall, ModelKind::Dirac { .. })
                | (Cutoff::Periodic, ModelKind::Momentum)
        );
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("cutoff {self:?} does not apply to model {}", model.name())))
        }
    }
}

/// Where a boundary condition came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// `f` continuous and `f'(x_n+) - f'(x_n-) = alpha_n f(x_n)`.
    SchrodingerDelta {
        alpha: Vec<f64>,
    },
    /// `f_1` continuous and `f_2(x_n+) - f_2(x_n-) = -(i alpha_n / c) f_1(x_n)`.
    DiracGs {
        alpha: Vec<f64>,
    },
    /// `f(x_n+) = exp(i alpha_n) f(x_n-)`.
    MomentumPhase {
        alpha: Vec<f64>,
    },
    /// No coupling at interior points.
    Free,
    Custom,
}

/// `Theta = {(u, v) : C_0 u + C_1 v = 0}` in the boundary coordinates of the
/// direct-sum triple, blocks ordered by interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    #[serde(with = "crate::numerics::json")]
    pub c0: ComplexMatrix,
    #[serde(with = "crate::numerics::json")]
    pub c1: ComplexMatrix,
    pub provenance: Provenance,
    pub cutoff: Option<Cutoff>,
}

impl BoundaryCondition {
    pub fn custom(c0: ComplexMatrix, c1: ComplexMatrix) -> Result<Self> {
        if c0.shape() != c1.shape() || c0.nrows() != c0.ncols() {
            return Err(Error::DimensionMismatch { expected: c0.nrows(), found: c1.ncols() });
        }
        Ok(Self { c0, c1, provenance: Provenance::Custom, cutoff: None })
    }

    pub fn dim(&self) -> usize {
        self.c0.ncols()
    }

    pub fn relation(&self) -> Subspace {
        Subspace::kernel_relation(&self.c0, &self.c1)
    }

    /// `||C_0 C_1^* - C_1 C_0^*||` relative to `||C_0||^2 + ||C_1||^2`, or
    /// infinity when `[C_0 C_1]` is rank deficient.
    pub fn selfadjoint_residual(&self) -> f64 {
        let both = crate::numerics::hstack(&[&self.c0, &self.c1]);
        let sv = crate::numerics::singular_values(&both);
        let smin = sv.last().copied().unwrap_or(0.0);
        if smin <= 1e-12 * sv[0] {
            return f64::INFINITY;
        }
        let scale = operator_norm(&self.c0).powi(2) + operator_norm(&self.c1).powi(2);
        max_abs(&(&self.c0 * self.c1.adjoint() - &self.c1 * self.c0.adjoint())) / scale
    }

    /// `B` with `Theta = graph B`, when `C_1` is invertible.
    pub fn operator(&self) -> Option<ComplexMatrix> {
        inverse(&self.c1).ok().map(|inv| -(inv * &self.c0))
    }

    /// `-(C_0 + C_1 M)^{-1} C_1`, the finite-dimensional factor of the resolvent formula.
    pub fn resolvent_factor(&self, m: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix> {
        let a = &self.c0 + &self.c1 * m;
        solve(&a, &self.c1).map(|x| -x).map_err(|_| Error::EigenvalueHit { lambda })
    }
}

/// Assembles `Theta` for local point interactions on the lattice.
///
/// `interactions` holds one coupling per interior point `x_1, ..., x_{N-1}`.
pub fn build_theta(
    model: ModelKind,
    lattice: &LatticeSpec,
    interactions: &[f64],
    cutoff: Cutoff,
) -> Result<BoundaryCondition> {
    model.validate()?;
    cutoff.check(model)?;
    let n = lattice.len();
    if interactions.len() + 1 != n {
        return Err(Error::LengthMismatch { expected: n - 1, found: interactions.len() });
    }
    if let Some(a) = interactions.iter().find(|a| !a.is_finite()) {
        return Err(Error::InvalidInput(format!("coupling {a} is not finite")));
    }
    let h = model.boundary_dim();
    let dim = h * n;
    let mut c0 = zeros(dim, dim);
    let mut c1 = zeros(dim, dim);
    // Index of the j-th local coordinate of block `b` (0-based).
    let at = |b: usize, j: usize| h * b + j;
    let one = c(1.0, 0.0);
    let mut row = 0;
    match model {
        ModelKind::Schroedinger => {
            // Gamma_0 = (f'(L), f'(R)), Gamma_1 = (-f(L), f(R)).
            let end = if cutoff == Cutoff::DirichletEnd { &mut c1 } else { &mut c0 };
            end[(0, at(0, 0))] = one;
            end[(1, at(n - 1, 1))] = one;
            row = 2;
            for (b, &alpha) in interactions.iter().enumerate() {
                c1[(row, at(b, 1))] = one;
                c1[(row, at(b + 1, 0))] = one;
                c0[(row + 1, at(b + 1, 0))] = one;
                c0[(row + 1, at(b, 1))] = -one;
                c1[(row + 1, at(b, 1))] = c(-alpha, 0.0);
                row += 2;
            }
        }
        ModelKind::Dirac { .. } => {
            // Gamma_0 = (f_1(L), i c f_2(R)), Gamma_1 = (i c f_2(L), f_1(R)).
            c0[(0, at(0, 0))] = one;
            c0[(1, at(n - 1, 1))] = one;
            row = 2;
            for (b, &alpha) in interactions.iter().enumerate() {
                c1[(row, at(b, 1))] = one;
                c0[(row, at(b + 1, 0))] = -one;
                c1[(row + 1, at(b + 1, 0))] = one;
                c0[(row + 1, at(b, 1))] = -one;
                c1[(row + 1, at(b, 1))] = c(-alpha, 0.0);
                row += 2;
            }
        }
        ModelKind::Momentum => {
            // f(L) = (Gamma_1 + i Gamma_0)/sqrt 2 and f(R) = (Gamma_1 - i Gamma_0)/sqrt 2.
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let mut link = |row: usize, from: usize, to: usize, phase: Complex64| {
                c0[(row, to)] += I * s;
                c1[(row, to)] += one * s;
                c0[(row, from)] += phase * I * s;
                c1[(row, from)] -= phase * s;
            };
            for (b, &alpha) in interactions.iter().enumerate() {
                link(row, at(b, 0), at(b + 1, 0), Complex64::from_polar(1.0, alpha));
                row += 1;
            }
            link(row, at(n - 1, 0), at(0, 0), one);
            row += 1;
        }
    }
    debug_assert_eq!(row, dim);
    let provenance = if interactions.iter().all(|a| *a == 0.0) {
        Provenance::Free
    } else {
        match model {
            ModelKind::Schroedinger => Provenance::SchrodingerDelta { alpha: interactions.to_vec() },
            ModelKind::Dirac { .. } => Provenance::DiracGs { alpha: interactions.to_vec() },
            ModelKind::Momentum => Provenance::MomentumPhase { alpha: interactions.to_vec() },
        }
    };
    let theta = BoundaryCondition { c0, c1, provenance, cutoff: Some(cutoff) };
    let residual = theta.selfadjoint_residual();
    if !(residual <= 1e-10) {
        return Err(Error::NonSelfadjointTheta { residual });
    }
    Ok(theta)
}

/// Boundary values `(X_n, Y_n) = (Gamma_0, Gamma_1)` of a fundamental system on
/// one interval, normalized to be real for real `lambda`.
pub fn fundamental_boundary_data(model: ModelKind, d: f64, lambda: Complex64) -> (ComplexMatrix, ComplexMatrix) {
    let s = model.state_dim();
    let maps = boundary_maps(model);
    let mut trace = zeros(2 * s, s);
    trace.view_mut((0, 0), (s, s)).copy_from(&identity(s));
    trace.view_mut((s, 0), (s, s)).copy_from(&transfer(model, lambda, d));
    let g = match model {
        ModelKind::Schroedinger => identity(2),
        ModelKind::Dirac { c: cc } => {
            let mut g = identity(2);
            g[(1, 1)] = -I / cc;
            g
        }
        ModelKind::Momentum => identity(1) * (-I * lambda * d / 2.0).exp(),
    };
    let t = trace * g;
    (&maps.gamma0 * &t, &maps.gamma1 * &t)
}

/// `det(C_0 X + C_1 Y)` with `(X, Y)` the block-diagonal fundamental boundary
/// data; it vanishes exactly at eigenvalues of the realization.
pub fn characteristic_determinant(
    model: ModelKind,
    lattice: &LatticeSpec,
    theta: &BoundaryCondition,
    lambda: Complex64,
) -> Result<Complex64> {
    let h = model.boundary_dim();
    let dim = h * lattice.len();
    if theta.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: theta.dim() });
    }
    let mut a = zeros(dim, dim);
    for b in 0..lattice.len() {
        let (x, y) = fundamental_boundary_data(model, lattice.spacing(b + 1), lambda);
        let cols = b * h;
        let block = theta.c0.columns(cols, h) * x + theta.c1.columns(cols, h) * y;
        a.columns_mut(cols, h).copy_from(&block);
    }
    det(&a)
}

/// Constant phase of the characteristic determinant on the real axis.
fn real_axis_phase(theta: &BoundaryCondition) -> Result<f64> {
    let plus = &theta.c0 + &theta.c1 * I;
    let minus = &theta.c0 - &theta.c1 * I;
    let u = solve(&plus, &minus)?;
    Ok(det(&plus)?.arg() + 0.5 * det(&u)?.arg())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootEntry {
    pub lambda: f64,
    pub residual: f64,
    pub bracket_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub method: &'static str,
    pub roots: Vec<RootEntry>,
    pub interval: (f64, f64),
    pub grid: usize,
    /// Points excluded from the scan.
    pub masked: Vec<f64>,
    pub advisories: Vec<String>,
    /// `(lambda, scan value)` samples, `None` where masked.
    #[serde(skip)]
    pub samples: Vec<(f64, Option<f64>)>,
}

impl SpectrumResult {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.lambda).collect()
    }

    /// Scan samples as `lambda,value` lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,value\n");
        for (x, v) in &self.samples {
            match v {
                Some(v) => writeln!(out, "{x:.17e},{v:.17e}").unwrap(),
                None => writeln!(out, "{x:.17e},").unwrap(),
            }
        }
        out
    }

    pub(crate) fn from_scan(
        method: &'static str,
        scan: crate::numerics::RootScan,
        interval: (f64, f64),
        grid: usize,
        masked: Vec<f64>,
    ) -> Self {
        let roots = scan
            .roots
            .iter()
            .filter(|r| r.x > interval.0 && r.x < interval.1)
            .map(|r| RootEntry { lambda: r.x, residual: r.residual, bracket_width: r.width })
            .collect();
        let advisories = scan
            .advisories
            .iter()
            .map(|a| match a {
                Advisory::GridTooCoarse { near, separation } => {
                    format!("grid too coarse near {near}: roots {separation:e} apart")
                }
                Advisory::RejectedBracket { near, residual } => {
                    format!("sign change near {near} rejected (residual {residual:e})")
                }
            })
            .collect();
        Self { method, roots, interval, grid, masked, advisories, samples: scan.samples }
    }
}

fn check_interval(lo: f64, hi: f64, grid: usize) -> Result<()> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() || grid < 2 {
        return Err(Error::InvalidInput(format!("bad scan interval ({lo}, {hi}) with grid {grid}")));
    }
    Ok(())
}

/// Eigenvalues of the realization in `(lo, hi)` as sign changes of the
/// characteristic determinant, refined by bisection.
pub fn det_scan(
    model: ModelKind,
    lattice: &LatticeSpec,
    theta: &BoundaryCondition,
    interval: (f64, f64),
    grid: usize,
    tol: Tolerance,
) -> Result<SpectrumResult> {
    check_interval(interval.0, interval.1, grid)?;
    let phase = Complex64::from_polar(1.0, -real_axis_phase(theta)?);
    characteristic_determinant(model, lattice, theta, c(interval.0, 0.0))?;
    let f = |x: f64| characteristic_determinant(model, lattice, theta, c(x, 0.0)).map_or(f64::NAN, |v| (v * phase).re);
    let scan = bracket_roots(f, interval.0, interval.1, grid, &[], 0.0, tol)?;
    Ok(SpectrumResult::from_scan("det_scan", scan, interval, grid, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krein::Relation;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::new(0.0, 1e-9).unwrap()
    }

    #[test]
    fn thetas_are_selfadjoint_relations() {
        let l = LatticeSpec::explicit(vec![1.0, 0.5, 2.0]).unwrap();
        for (model, cutoff) in [
            (ModelKind::Schroedinger, Cutoff::DirichletEnd),
            (ModelKind::Schroedinger, Cutoff::NeumannEnd),
            (ModelKind::Dirac { c: 1.5 }, Cutoff::DiracHardWall),
            (ModelKind::Momentum, Cutoff::Periodic),
        ] {
            let t = build_theta(model, &l, &[0.7, -1.2], cutoff).unwrap();
            assert!(t.relation().is_selfadjoint_relation(), "{model:?}");
        }
    }

    #[test]
    fn wrong_lengths_and_cutoffs() {
        let l = LatticeSpec::one_over_n(3);
        assert_eq!(
            build_theta(ModelKind::Schroedinger, &l, &[1.0], Cutoff::DirichletEnd),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        );
        assert!(build_theta(ModelKind::Schroedinger, &l, &[1.0, 1.0], Cutoff::DiracHardWall).is_err());
    }

    #[test]
    fn non_selfadjoint_custom_theta_detected() {
        let t = BoundaryCondition::custom(identity(2), identity(2) * I).unwrap();
        assert!(t.selfadjoint_residual() > 0.1);
    }

    #[test]
    fn free_dirichlet_box() {
        let l = LatticeSpec::constant(1.0, 10).unwrap();
        let t = build_theta(ModelKind::Schroedinger, &l, &[0.0; 9], Cutoff::DirichletEnd).unwrap();
        assert_eq!(t.provenance, Provenance::Free);
        let r = det_scan(ModelKind::Schroedinger, &l, &t, (0.0, 4.5), 400, tol()).unwrap();
        let ev = r.eigenvalues();
        assert_eq!(ev.len(), 6);
        for (k, x) in ev.iter().enumerate() {
            assert!((x - (PI * (k + 1) as f64 / 10.0).powi(2)).abs() < 1e-8);
        }
    }

    #[test]
    fn eigenvalues_on_block_poles_are_found() {
        // lambda = pi^2 is a Neumann eigenvalue of every unit interval and a
        // Dirichlet eigenvalue of the box [0, 2].
        let l = LatticeSpec::constant(1.0, 2).unwrap();
        let t = build_theta(ModelKind::Schroedinger, &l, &[0.0], Cutoff::DirichletEnd).unwrap();
        let r = det_scan(ModelKind::Schroedinger, &l, &t, (5.0, 12.0), 200, tol()).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0].lambda - PI * PI).abs() < 1e-9);
    }

    #[test]
    fn momentum_phases() {
        let l = LatticeSpec::explicit(vec![0.5, 1.0, 1.5]).unwrap();
        let alpha = [0.4, 1.1];
        let t = build_theta(ModelKind::Momentum, &l, &alpha, Cutoff::Periodic).unwrap();
        let r = det_scan(ModelKind::Momentum, &l, &t, (-5.0, 9.0), 500, tol()).unwrap();
        let total: f64 = alpha.iter().sum();
        let expected: Vec<f64> =
            (-2..=4).map(|k| (2.0 * PI * k as f64 - total) / 3.0).filter(|x| *x > -5.0 && *x < 9.0).collect();
        assert_eq!(r.roots.len(), expected.len());
        for (a, b) in r.eigenvalues().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let l = LatticeSpec::constant(1.0, 1).unwrap();
        let t = build_theta(ModelKind::Schroedinger, &l, &[], Cutoff::NeumannEnd).unwrap();
        let r = det_scan(ModelKind::Schroedinger, &l, &t, (-1.0, 1.0), 11, tol()).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("lambda,value\n"));
        assert_eq!(csv.lines().count(), 12);
    }
}

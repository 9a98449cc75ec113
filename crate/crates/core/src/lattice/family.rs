use super::LatticeSpec;
use crate::error::{Error, Result};
use crate::models::{boundary_maps, weyl_block, weyl_block_dz, BoundaryMaps, ModelKind, POLE_GUARD};
use crate::numerics::trig::{cot, csc, tan_ratio, tan_ratio_ds};
use crate::numerics::{
    block_diag, from_rows, identity, imaginary_part, inverse, operator_norm, psd_check, real_matrix, zeros, Complex64,
    ComplexMatrix, PsdReport, Tolerance,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Blockwise change of boundary maps `(Gamma_0'; Gamma_1') = V_n (Gamma_0; Gamma_1)`
/// with a Krein-unitary `V_n` depending on `d~_n = min(1, d_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockTransform {
    /// `(Gamma_1, -Gamma_0)`; Weyl block `-M^{-1}`.
    Transpose,
    /// `(d~^{-1/2} Gamma_0, d~^{1/2} Gamma_1)`; Weyl block `d~ M`.
    DiagSqrt,
    /// Regularized Schroedinger maps built from `f` and `f'` with weights `d~^{1/2}`, `d~^{-1/2}`, `d~^{-3/2}`.
    SchrodingerRegularized,
    /// Dirac maps with Weyl block `(sigma_1 - M)^{-1}`.
    DiracTilde,
}

impl BlockTransform {
    pub fn name(&self) -> &'static str {
        match self {
            BlockTransform::Transpose => "transpose",
            BlockTransform::DiagSqrt => "diag_sqrt",
            BlockTransform::SchrodingerRegularized => "schrodinger_regularized",
            BlockTransform::DiracTilde => "dirac_tilde",
        }
    }

    pub fn applies_to(&self, model: ModelKind) -> bool {
        match self {
            BlockTransform::Transpose => true,
            BlockTransform::DiagSqrt => !matches!(model, ModelKind::Dirac { .. }),
            BlockTransform::SchrodingerRegularized => model == ModelKind::Schroedinger,
            BlockTransform::DiracTilde => matches!(model, ModelKind::Dirac { .. }),
        }
    }

    /// `V` acting on `(Gamma_0; Gamma_1)` in `C^h (+) C^h`.
    pub fn matrix(&self, h: usize, d: f64) -> ComplexMatrix {
        let dt = d.min(1.0);
        let s = dt.sqrt();
        let eye = identity(h);
        let mut v = zeros(2 * h, 2 * h);
        let mut put = |r: usize, c: usize, b: &ComplexMatrix| v.view_mut((r * h, c * h), (h, h)).copy_from(b);
        match self {
            BlockTransform::Transpose => {
                put(0, 1, &eye);
                put(1, 0, &(-&eye));
            }
            BlockTransform::DiagSqrt => {
                put(0, 0, &(&eye / Complex64::from(s)));
                put(1, 1, &(&eye * Complex64::from(s)));
            }
            BlockTransform::SchrodingerRegularized => {
                let k1 = real_matrix(h, h, &vec![1.0; h * h]);
                put(0, 1, &(&eye * Complex64::from(-s)));
                put(1, 0, &(&eye / Complex64::from(s)));
                put(1, 1, &(k1 * Complex64::from(-1.0 / (s * dt))));
            }
            BlockTransform::DiracTilde => {
                let s1 = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
                put(0, 0, &s1);
                put(0, 1, &(-&eye));
                put(1, 0, &eye);
            }
        }
        v
    }
}

/// A model together with a chain of block transforms applied left to right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockFamily {
    pub model: ModelKind,
    #[serde(default)]
    pub chain: Vec<BlockTransform>,
}

// Taylor coefficients of g1(u) = (1 - u cot u)/u^2 and g2(u) = (1 - u csc u)/u^2 in u^2.
const G1: [f64; 6] = [1.0 / 3.0, 1.0 / 45.0, 2.0 / 945.0, 1.0 / 4725.0, 2.0 / 93555.0, 1382.0 / 638512875.0];
const G2: [f64; 6] =
    [-1.0 / 6.0, -7.0 / 360.0, -31.0 / 15120.0, -127.0 / 604800.0, -73.0 / 3421440.0, -1414477.0 / 653837184000.0];
const SERIES_RADIUS: f64 = 0.1;

fn series(coef: &[f64], u2: Complex64, weighted: bool) -> Complex64 {
    coef.iter()
        .enumerate()
        .rev()
        .fold(Complex64::from(0.0), |acc, (k, c)| acc * u2 + c * if weighted { (k + 1) as f64 } else { 1.0 })
}

/// `g1(u)`, `g2(u)` and `D_j(u) = d/dz [z g_j(u)]`, where `u = sqrt(z) d`.
fn regularized_kernels(u: Complex64) -> [Complex64; 4] {
    if u.norm() < SERIES_RADIUS {
        let u2 = u * u;
        return [series(&G1, u2, false), series(&G2, u2, false), series(&G1, u2, true), series(&G2, u2, true)];
    }
    let (ct, cs) = (cot(u), csc(u));
    let u2 = u * u;
    [(1.0 - u * ct) / u2, (1.0 - u * cs) / u2, (u * cs * cs - ct) / (2.0 * u), (u * cs * ct - cs) / (2.0 * u)]
}

fn regularized_block(d: f64, z: Complex64) -> (ComplexMatrix, ComplexMatrix) {
    let dt = d.min(1.0);
    let u = z.sqrt() * d;
    let [g1, g2, d1, d2] = regularized_kernels(u);
    let ratio = dt / d;
    let u2 = u * u;
    // (1/d~^2)(1 - (d~/d) u cot u) and its csc analogue.
    let (r11, r12) = if ratio == 1.0 {
        (z * g1, z * g2)
    } else {
        ((1.0 - ratio * (1.0 - u2 * g1)) / (dt * dt), (1.0 - ratio * (1.0 - u2 * g2)) / (dt * dt))
    };
    let (p11, p12) = (d1 / ratio, d2 / ratio);
    (from_rows(&[&[r11, r12], &[r12, r11]]), from_rows(&[&[p11, p12], &[p12, p11]]))
}

fn dirichlet_guard(d: f64, z: Complex64) -> Result<()> {
    let width = 2.0 * PI * (z.re.abs().sqrt() + PI / d) / d;
    let poles = ModelKind::Schroedinger.block_poles(d, z.re - width, z.re + width);
    for p in poles.into_iter().filter(|p| *p > 0.0) {
        let dist = (z - p).norm();
        if dist < POLE_GUARD * p.max(1.0) {
            return Err(Error::PoleProximity { z, distance: dist, block: None });
        }
    }
    Ok(())
}

fn tilde_poles(cc: f64, d: f64, z: Complex64) -> f64 {
    let m = cc * cc / 2.0;
    let mut best = (z - m).norm().min((z + m).norm());
    let kz = ((z.re * z.re - m * m).max(0.0)).sqrt() / cc;
    let j0 = (kz * d / (2.0 * PI)).round() as i64;
    for j in (j0 - 1).max(1)..=(j0 + 1).max(1) {
        let e = ((2.0 * PI * j as f64 * cc / d).powi(2) + m * m).sqrt();
        best = best.min((z - e).norm()).min((z + e).norm());
    }
    best
}

fn tilde_block(cc: f64, d: f64, z: Complex64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let dist = tilde_poles(cc, d, z);
    if dist < POLE_GUARD * z.norm().max(1.0) {
        return Err(Error::PoleProximity { z, distance: dist, block: None });
    }
    let m = cc * cc / 2.0;
    let s = (z * z - m * m) / (cc * cc);
    let th = tan_ratio(s, d / 2.0);
    let thp = tan_ratio_ds(s, d / 2.0) * (2.0 * z / (cc * cc));
    let (a, b) = ((z - m) * th, (z + m) * th);
    let half = Complex64::from(0.5);
    let w = from_rows(&[&[-0.5 / a, half], &[half, -0.5 * cc * cc / b]]);
    let dw11 = (th + (z - m) * thp) / (2.0 * a * a);
    let dw22 = 0.5 * cc * cc * (th + (z + m) * thp) / (b * b);
    let zero = Complex64::from(0.0);
    Ok((w, from_rows(&[&[dw11, zero], &[zero, dw22]])))
}

/// Schroedinger blocks commute with `sigma_1`, so every chain acts on the two
/// eigenvalues along `(1, 1)` and `(1, -1)` separately:
/// `tan(u/2)/w` and `-cot(u/2)/w` with `u = w d`, `w^2 = z`.
fn schroedinger_eigen(d: f64, z: Complex64, chain: &[BlockTransform]) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let dt = d.min(1.0);
    let (mut lam, mut dlam, rest) = match chain.first() {
        Some(BlockTransform::SchrodingerRegularized) => {
            dirichlet_guard(d, z)?;
            let (m, mz) = regularized_block(d, z);
            let l = [m[(0, 0)] + m[(0, 1)], m[(0, 0)] - m[(0, 1)]];
            let dl = [mz[(0, 0)] + mz[(0, 1)], mz[(0, 0)] - mz[(0, 1)]];
            (l, dl, &chain[1..])
        }
        _ => {
            weyl_block(ModelKind::Schroedinger, d, z)?;
            let t = tan_ratio(z, d / 2.0);
            let tp = tan_ratio_ds(z, d / 2.0);
            let zt = z * t;
            ([t, -1.0 / zt], [tp, (t + z * tp) / (zt * zt)], chain)
        }
    };
    for tr in rest {
        for k in 0..2 {
            match tr {
                BlockTransform::DiagSqrt => {
                    lam[k] *= dt;
                    dlam[k] *= dt;
                }
                BlockTransform::Transpose => {
                    if lam[k].norm() == 0.0 {
                        return Err(Error::Singular { sigma_min: 0.0 });
                    }
                    dlam[k] /= lam[k] * lam[k];
                    lam[k] = -1.0 / lam[k];
                }
                other => {
                    return Err(Error::SchemeMismatch { scheme: other.name().into(), model: "schroedinger".into() })
                }
            }
        }
    }
    let assemble = |l: [Complex64; 2]| {
        let (p, q) = ((l[0] + l[1]) / 2.0, (l[0] - l[1]) / 2.0);
        from_rows(&[&[p, q], &[q, p]])
    };
    Ok((assemble(lam), assemble(dlam)))
}

/// `M' = (C + D M)(A + B M)^{-1}` and its derivative for `V = [[A, B], [C, D]]`.
fn mobius(v: &ComplexMatrix, m: &ComplexMatrix, mz: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let h = m.nrows();
    let a = v.view((0, 0), (h, h));
    let b = v.view((0, h), (h, h));
    let c = v.view((h, 0), (h, h));
    let dd = v.view((h, h), (h, h));
    let den = inverse(&(a + b * m))?;
    let out = (c + dd * m) * &den;
    let outz = (dd - &out * b) * mz * &den;
    Ok((out, outz))
}

impl BlockFamily {
    pub fn new(model: ModelKind, chain: Vec<BlockTransform>) -> Result<Self> {
        let f = Self { model, chain };
        f.validate()?;
        Ok(f)
    }

    pub fn base(model: ModelKind) -> Self {
        Self { model, chain: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        for t in &self.chain {
            if !t.applies_to(self.model) {
                return Err(Error::SchemeMismatch { scheme: t.name().into(), model: self.model.name().into() });
            }
        }
        Ok(())
    }

    pub fn then(&self, t: BlockTransform) -> Result<Self> {
        let mut chain = self.chain.clone();
        chain.push(t);
        Self::new(self.model, chain)
    }

    pub fn transposed(&self) -> Self {
        let mut chain = self.chain.clone();
        chain.push(BlockTransform::Transpose);
        Self { model: self.model, chain }
    }

    /// Chain with adjacent transpose pairs removed; the Weyl block is unchanged.
    pub fn normalized_chain(&self) -> Vec<BlockTransform> {
        let mut out: Vec<BlockTransform> = Vec::new();
        for &t in &self.chain {
            if t == BlockTransform::Transpose && out.last() == Some(&BlockTransform::Transpose) {
                out.pop();
            } else {
                out.push(t);
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let mut s = self.model.name().to_string();
        for t in &self.chain {
            s.push_str(" > ");
            s.push_str(t.name());
        }
        s
    }

    pub fn boundary_dim(&self) -> usize {
        self.model.boundary_dim()
    }

    /// Product of the chain matrices on one interval.
    pub fn v_matrix(&self, d: f64) -> ComplexMatrix {
        let h = self.boundary_dim();
        self.chain.iter().fold(identity(2 * h), |acc, t| t.matrix(h, d) * acc)
    }

    /// Transformed boundary maps on the trace vector of one interval.
    pub fn maps(&self, d: f64) -> BoundaryMaps {
        boundary_maps(self.model).transformed(&self.v_matrix(d))
    }

    /// Weyl block and its `z`-derivative on one interval.
    pub fn weyl_with_derivative(&self, d: f64, z: Complex64) -> Result<(ComplexMatrix, ComplexMatrix)> {
        self.validate()?;
        let h = self.boundary_dim();
        let chain = self.normalized_chain();
        let (mut m, mut mz, rest) = match (self.model, chain.first()) {
            (ModelKind::Schroedinger, Some(_)) => {
                let (m, mz) = schroedinger_eigen(d, z, &chain)?;
                (m, mz, &chain[chain.len()..])
            }
            (ModelKind::Dirac { c }, Some(BlockTransform::DiracTilde)) => {
                let (m, mz) = tilde_block(c, d, z)?;
                (m, mz, &chain[1..])
            }
            (_, Some(BlockTransform::DiagSqrt)) => {
                let dt = Complex64::from(d.min(1.0));
                (weyl_block(self.model, d, z)? * dt, weyl_block_dz(self.model, d, z)? * dt, &chain[1..])
            }
            _ => (weyl_block(self.model, d, z)?, weyl_block_dz(self.model, d, z)?, &chain[..]),
        };
        for t in rest {
            let (a, b) = mobius(&t.matrix(h, d), &m, &mz)?;
            m = a;
            mz = b;
        }
        Ok((m, mz))
    }

    pub fn weyl(&self, d: f64, z: Complex64) -> Result<ComplexMatrix> {
        self.weyl_with_derivative(d, z).map(|p| p.0)
    }

    pub fn weyl_dz(&self, d: f64, z: Complex64) -> Result<ComplexMatrix> {
        self.weyl_with_derivative(d, z).map(|p| p.1)
    }

    /// `M'(a)` at a point of the model's common gap.
    pub fn weyl_derivative_at(&self, d: f64, a: f64) -> Result<ComplexMatrix> {
        self.model.check_gap(a)?;
        self.weyl_dz(d, Complex64::from(a))
    }
}

/// Block-diagonal matrix stored blockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonal {
    pub blocks: Vec<ComplexMatrix>,
}

impl BlockDiagonal {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.nrows()).sum()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        block_diag(&self.blocks)
    }

    /// Operator norm, the maximum of the block norms.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(operator_norm).fold(0.0, f64::max)
    }

    /// Worst block of the PSD check applied to `Im M`.
    pub fn imaginary_part_psd(&self, tol: Tolerance) -> Result<PsdReport> {
        let mut worst: Option<PsdReport> = None;
        for b in &self.blocks {
            let r = psd_check(&imaginary_part(b)?, tol)?;
            let replace = match &worst {
                None => true,
                Some(w) => (r.min_eigenvalue + r.threshold) < (w.min_eigenvalue + w.threshold),
            };
            if replace {
                worst = Some(r);
            }
        }
        worst.ok_or_else(|| Error::InvalidInput("empty block diagonal".into()))
    }
}

/// Weyl function of the truncated direct sum: one block per interval.
pub fn direct_sum_weyl(family: &BlockFamily, lattice: &LatticeSpec, z: Complex64) -> Result<BlockDiagonal> {
    family.validate()?;
    let blocks = (1..=lattice.len())
        .into_par_iter()
        .map(|n| {
            family.weyl(lattice.spacing(n), z).map_err(|e| match e {
                Error::PoleProximity { z, distance, .. } => Error::PoleProximity { z, distance, block: Some(n) },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockDiagonal { blocks })
}

/// A lattice equipped with a renormalized family of blockwise maps.
#[derive(Debug, Clone, PartialEq)]
pub struct RenormalizedLattice {
    pub family: BlockFamily,
    pub lattice: LatticeSpec,
}

impl RenormalizedLattice {
    pub fn weyl(&self, z: Complex64) -> Result<BlockDiagonal> {
        direct_sum_weyl(&self.family, &self.lattice, z)
    }

    pub fn block(&self, n: usize, z: Complex64) -> Result<ComplexMatrix> {
        self.family.weyl(self.lattice.spacing(n), z)
    }

    pub fn maps(&self, n: usize) -> BoundaryMaps {
        self.family.maps(self.lattice.spacing(n))
    }
}

/// Applies a renormalization scheme blockwise.
pub fn renormalize(model: ModelKind, lattice: &LatticeSpec, scheme: BlockTransform) -> Result<RenormalizedLattice> {
    if scheme == BlockTransform::Transpose || !scheme.applies_to(model) {
        return Err(Error::SchemeMismatch { scheme: scheme.name().into(), model: model.name().into() });
    }
    Ok(RenormalizedLattice { family: BlockFamily::new(model, vec![scheme])?, lattice: lattice.clone() })
}

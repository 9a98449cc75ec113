//! Per-interval models: momentum `-i d/dx`, Schroedinger `-d^2/dx^2` and the
//! one-dimensional Dirac operator with mass term `c^2/2`.
//!
//! Each model comes with boundary maps on an interval of length `d`, its Weyl
//! block in closed form, the spectrum of `A_0 = ker Gamma_0` (poles of the
//! block) and the propagators used to build defect elements.

mod boundary;
mod defect;

pub use boundary::{boundary_maps, BoundaryMaps};
pub use defect::{
    apply_expression, defect_solution, forcing, generator, homogeneous, state_trace, transfer, value_projection,
    weyl_from_maps, DefectSolution,
};

use crate::error::{Error, Result};
use crate::numerics::trig::{cot, csc, sec, sinc, tan_ratio, tan_ratio_ds};
use crate::numerics::{c, from_rows, sqrt_upper, Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelKind {
    Momentum,
    #[serde(alias = "schrodinger")]
    Schroedinger,
    Dirac {
        c: f64,
    },
}

/// Relative distance to a block pole below which evaluation is refused.
pub const POLE_GUARD: f64 = 1e-8;

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Momentum => "momentum",
            ModelKind::Schroedinger => "schroedinger",
            ModelKind::Dirac { .. } => "dirac",
        }
    }

    /// Dimension of the boundary space of one interval.
    pub fn boundary_dim(&self) -> usize {
        match self {
            ModelKind::Momentum => 1,
            _ => 2,
        }
    }

    /// Dimension of the first-order state vector (`(f, f')` for Schroedinger).
    pub fn state_dim(&self) -> usize {
        match self {
            ModelKind::Momentum => 1,
            _ => 2,
        }
    }

    /// Number of components of a function value.
    pub fn value_dim(&self) -> usize {
        match self {
            ModelKind::Dirac { .. } => 2,
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let ModelKind::Dirac { c } = self {
            if !(*c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidInput(format!("Dirac speed c must be positive, got {c}")));
            }
        }
        Ok(())
    }

    /// Open interval of the real line free of every block pole, independent of `d`.
    pub fn common_gap(&self) -> Option<(f64, f64)> {
        match self {
            ModelKind::Momentum => None,
            ModelKind::Schroedinger => Some((f64::NEG_INFINITY, 0.0)),
            ModelKind::Dirac { c } => Some((-c * c / 2.0, c * c / 2.0)),
        }
    }

    pub fn check_gap(&self, a: f64) -> Result<()> {
        match self.common_gap() {
            None => Err(Error::NoCommonGap),
            Some((lo, hi)) if a > lo && a < hi => Ok(()),
            Some((lo, hi)) => Err(Error::GapViolation { a, gap: format!("({lo}, {hi})") }),
        }
    }

    /// Eigenvalues of `A_0` on one interval of length `d` lying in `[lo, hi]`.
    pub fn block_poles(&self, d: f64, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match *self {
            ModelKind::Momentum => {
                let step = 2.0 * PI / d;
                let k0 = (lo / step).ceil() as i64;
                let k1 = (hi / step).floor() as i64;
                out.extend((k0..=k1).map(|k| k as f64 * step));
            }
            ModelKind::Schroedinger => {
                if hi >= 0.0 {
                    let kmax = (hi.sqrt() * d / PI).floor() as i64;
                    out.extend((0..=kmax).map(|k| (k as f64 * PI / d).powi(2)).filter(|p| *p >= lo));
                }
            }
            ModelKind::Dirac { c } => {
                let m = c * c / 2.0;
                let r = lo.abs().max(hi.abs());
                if r > m {
                    let jmax = ((r * r - m * m).sqrt() * d / (c * PI) - 0.5).floor() as i64;
                    for j in 0..=jmax.max(-1) {
                        let e = ((c * PI * (j as f64 + 0.5) / d).powi(2) + m * m).sqrt();
                        for p in [-e, e] {
                            if p >= lo && p <= hi {
                                out.push(p);
                            }
                        }
                    }
                }
                out.sort_by(|a, b| a.total_cmp(b));
            }
        }
        out
    }

    /// Distance from `z` to the nearest block pole.
    pub fn pole_distance(&self, d: f64, z: Complex64) -> (f64, f64) {
        let x = z.re;
        let width = match *self {
            ModelKind::Momentum => 2.0 * PI / d,
            ModelKind::Schroedinger => 2.0 * PI * (x.abs().sqrt() + PI / d) / d,
            ModelKind::Dirac { c } => 2.0 * c * PI / d + c * c,
        };
        let poles = self.block_poles(d, x - width, x + width);
        poles
            .into_iter()
            .map(|p| ((z - p).norm(), p))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap_or((f64::INFINITY, 0.0))
    }

    fn guard(&self, d: f64, z: Complex64) -> Result<()> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidInput(format!("interval length must be positive, got {d}")));
        }
        let (dist, p) = self.pole_distance(d, z);
        if dist < POLE_GUARD * p.abs().max(1.0) {
            return Err(Error::PoleProximity { z, distance: dist, block: None });
        }
        Ok(())
    }
}

/// Kinematic quantities of the Dirac model at spectral parameter `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracKinematics {
    /// `k = c^{-1} sqrt(z^2 - c^4/4)` with `Im k >= 0`.
    pub k: Complex64,
    /// `k_1 = c k / (z + c^2/2)`.
    pub k1: Complex64,
}

pub fn dirac_kinematics(cc: f64, z: Complex64) -> DiracKinematics {
    let k = sqrt_upper(z * z - cc.powi(4) / 4.0) / cc;
    DiracKinematics { k, k1: cc * k / (z + cc * cc / 2.0) }
}

fn schroedinger_block(w: Complex64, d: f64) -> ComplexMatrix {
    let u = w * d;
    if u.im.abs() < 30.0 {
        // -(1 / (z d sinc u)) [[cos u, -1], [-1, cos u]]: accurate entries for small u.
        let s = -1.0 / (w * w * d * sinc(u));
        let cs = u.cos();
        return from_rows(&[&[s * cs, -s], &[-s, s * cs]]);
    }
    let (ct, cs) = (cot(u), csc(u));
    let s = -1.0 / w;
    from_rows(&[&[s * ct, -s * cs], &[-s * cs, s * ct]])
}

/// Schroedinger block evaluated with an explicitly chosen square root `w` of `z`.
pub fn schroedinger_block_with_root(w: Complex64, d: f64) -> ComplexMatrix {
    schroedinger_block(w, d)
}

/// Closed-form Weyl block `M_n(z)` of one interval of length `d`.
pub fn weyl_block(model: ModelKind, d: f64, z: Complex64) -> Result<ComplexMatrix> {
    model.validate()?;
    model.guard(d, z)?;
    Ok(match model {
        ModelKind::Momentum => from_rows(&[&[-cot(z * d / 2.0)]]),
        ModelKind::Schroedinger => schroedinger_block(z.sqrt(), d),
        ModelKind::Dirac { c: cc } => {
            // Written through tan(dk)/k and sec(dk), both even in k, so no branch enters.
            let m = cc * cc / 2.0;
            let s = (z * z - m * m) / (cc * cc);
            let t = tan_ratio(s, d);
            let sc = sec(s.sqrt() * d);
            from_rows(&[&[(z - m) * t, sc], &[sc, (z + m) * t / (cc * cc)]])
        }
    })
}

/// Complex derivative `dM_n/dz` in closed form.
pub fn weyl_block_dz(model: ModelKind, d: f64, z: Complex64) -> Result<ComplexMatrix> {
    model.validate()?;
    model.guard(d, z)?;
    Ok(match model {
        ModelKind::Momentum => {
            let s = csc(z * d / 2.0);
            from_rows(&[&[d / 2.0 * s * s]])
        }
        ModelKind::Schroedinger => {
            let w = z.sqrt();
            let (ct, cs) = (cot(w * d), csc(w * d));
            let d11 = d * cs * cs / w + ct / (w * w);
            let d12 = -d * cs * ct / w - cs / (w * w);
            let f = 1.0 / (2.0 * w);
            from_rows(&[&[f * d11, f * d12], &[f * d12, f * d11]])
        }
        ModelKind::Dirac { c: cc } => {
            let m = cc * cc / 2.0;
            let s = (z * z - m * m) / (cc * cc);
            let ds = 2.0 * z / (cc * cc);
            let t = tan_ratio(s, d);
            let ts = tan_ratio_ds(s, d);
            let sc = sec(s.sqrt() * d);
            let d11 = t + (z - m) * ts * ds;
            let d22 = (t + (z + m) * ts * ds) / (cc * cc);
            let d12 = d / 2.0 * sc * t * ds;
            from_rows(&[&[d11, d12], &[d12, d22]])
        }
    })
}

/// `M_n'(a)` at a point `a` of the common spectral gap.
pub fn weyl_block_derivative(model: ModelKind, d: f64, a: f64) -> Result<ComplexMatrix> {
    model.check_gap(a)?;
    weyl_block_dz(model, d, c(a, 0.0))
}

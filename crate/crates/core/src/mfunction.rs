//! Titchmarsh-Weyl coefficient of `-y'' + q y` on the half-line with
//! `Gamma_0 f = f(0)`, `Gamma_1 f = f'(0)`, for piecewise-constant `q`.
//!
//! With `c(0) = 1, c'(0) = 0` and `s(0) = 0, s'(0) = 1`, the solution
//! `psi = c + m s` is square integrable. At truncation `L` the admissible
//! values of `m` fill the Weyl disk with center `-W(c, conj s)/W(s, conj s)`
//! and radius `1/|W(s, conj s)|`, Wronskians taken at `L`.

use crate::error::{Error, Result};
use crate::numerics::{c, Complex64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialPiece {
    pub length: f64,
    pub q: f64,
}

/// Piecewise-constant potential on `[0, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SLProblem {
    pub pieces: Vec<PotentialPiece>,
}

impl SLProblem {
    pub fn new(pieces: Vec<PotentialPiece>) -> Result<Self> {
        let p = Self { pieces };
        p.validate()?;
        Ok(p)
    }

    pub fn constant(q: f64, length: f64) -> Result<Self> {
        Self::new(vec![PotentialPiece { length, q }])
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(Error::InvalidInput("potential needs at least one piece".into()));
        }
        for p in &self.pieces {
            if !(p.length > 0.0 && p.length.is_finite() && p.q.is_finite()) {
                return Err(Error::InvalidInput(format!("bad potential piece {p:?}")));
            }
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|p| p.length).sum()
    }

    /// Same potential cut at `length`.
    pub fn truncated(&self, length: f64) -> Self {
        let mut left = length;
        let mut pieces = Vec::new();
        for p in &self.pieces {
            if left <= 0.0 {
                break;
            }
            pieces.push(PotentialPiece { length: p.length.min(left), q: p.q });
            left -= p.length;
        }
        Self { pieces }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MFunctionValue {
    #[serde(serialize_with = "ser_complex")]
    pub lambda: Complex64,
    /// Center of the Weyl disk at truncation `L`.
    #[serde(serialize_with = "ser_complex")]
    pub m: Complex64,
    pub radius: f64,
    pub length: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// `(c, c', s, s')` at `L`, jointly rescaled to unit maximum modulus.
fn propagate(p: &SLProblem, lambda: Complex64) -> [Complex64; 4] {
    let (mut y, mut yp) = ([c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]);
    for piece in &p.pieces {
        let w = (lambda - piece.q).sqrt();
        // Substeps grow by at most e^{30}.
        let steps = (w.im.abs() * piece.length / 30.0).ceil().max(1.0);
        let h = piece.length / steps;
        let x = w * h;
        let cs = x.cos();
        let sn = if x.norm() < 1e-8 { c(h, 0.0) } else { x.sin() / w };
        let k = -(lambda - piece.q) * sn;
        for _ in 0..steps as usize {
            for j in 0..2 {
                let (a, b) = (y[j], yp[j]);
                y[j] = cs * a + sn * b;
                yp[j] = k * a + cs * b;
            }
            let scale = y.iter().chain(&yp).map(|z| z.norm()).fold(0.0, f64::max);
            if scale > 1e100 {
                for v in y.iter_mut().chain(yp.iter_mut()) {
                    *v /= scale;
                }
            }
        }
    }
    let scale = y.iter().chain(&yp).map(|z| z.norm()).fold(0.0, f64::max);
    [y[0] / scale, yp[0] / scale, y[1] / scale, yp[1] / scale]
}

/// Weyl-disk center and radius at the truncation length of `p`.
///
/// For real `lambda` the disk collapses onto the real line; the value returned
/// is the Dirichlet endpoint value `-c(L)/s(L)` and the radius is half the
/// distance to the Neumann value `-c'(L)/s'(L)`.
pub fn m_function(p: &SLProblem, lambda: Complex64) -> Result<MFunctionValue> {
    p.validate()?;
    let [cv, cp, sv, sp] = propagate(p, lambda);
    // W(c, s) is constant; after rescaling it carries the common factor squared.
    let wcs = cv * sp - cp * sv;
    let (m, radius) = if lambda.im != 0.0 {
        let wss = sv * sp.conj() - sp * sv.conj();
        let wcsb = cv * sp.conj() - cp * sv.conj();
        (-wcsb / wss, wcs.norm() / wss.norm())
    } else {
        let md = -cv / sv;
        let mn = -cp / sp;
        (md, 0.5 * (md - mn).norm())
    };
    Ok(MFunctionValue { lambda, m, radius, length: p.length() })
}

use super::{BoundaryMaps, ModelKind};
use crate::error::{Error, Result};
use crate::numerics::trig::sinc;
use crate::numerics::{c, from_rows, identity, solve, vstack, Complex64, ComplexMatrix, ExpSum, I};

/// `K(z)` of the first-order system `y' = K y` solved by `l f = z f`.
pub fn generator(model: ModelKind, z: Complex64) -> ComplexMatrix {
    match model {
        ModelKind::Momentum => from_rows(&[&[I * z]]),
        ModelKind::Schroedinger => from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[-z, c(0.0, 0.0)]]),
        ModelKind::Dirac { c: cc } => {
            let m = cc * cc / 2.0;
            from_rows(&[&[c(0.0, 0.0), I * (z + m) / cc], &[I * (z - m) / cc, c(0.0, 0.0)]])
        }
    }
}

/// `K^2 = -kappa I` for the two-dimensional systems.
fn kappa(model: ModelKind, z: Complex64) -> Complex64 {
    match model {
        ModelKind::Momentum => -z * z,
        ModelKind::Schroedinger => z,
        ModelKind::Dirac { c: cc } => (z * z - cc.powi(4) / 4.0) / (cc * cc),
    }
}

/// Propagator `exp(K t)`, written through `cos` and `sinc` of `t sqrt(kappa)` so it is entire in `z`.
pub fn transfer(model: ModelKind, z: Complex64, t: f64) -> ComplexMatrix {
    match model {
        ModelKind::Momentum => from_rows(&[&[(I * z * t).exp()]]),
        _ => {
            let w = kappa(model, z).sqrt() * t;
            identity(2) * w.cos() + generator(model, z) * (sinc(w) * t)
        }
    }
}

/// Matrix `B` with `y' = K y + B f` for `(l - z) u = f`.
pub fn forcing(model: ModelKind) -> ComplexMatrix {
    match model {
        ModelKind::Momentum => from_rows(&[&[I]]),
        ModelKind::Schroedinger => from_rows(&[&[c(0.0, 0.0)], &[c(-1.0, 0.0)]]),
        ModelKind::Dirac { c: cc } => from_rows(&[&[c(0.0, 0.0), I / cc], &[I / cc, c(0.0, 0.0)]]),
    }
}

/// Picks the function value out of a state vector.
pub fn value_projection(model: ModelKind) -> ComplexMatrix {
    match model {
        ModelKind::Schroedinger => from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)]]),
        _ => identity(model.state_dim()),
    }
}

/// `exp(K t) s0` as a state-valued exponential sum.
pub fn homogeneous(model: ModelKind, z: Complex64, s0: &[Complex64]) -> Result<ExpSum> {
    if let ModelKind::Momentum = model {
        return Ok(ExpSum::term(I * z, vec![s0[0]]));
    }
    let mu = I * kappa(model, z).sqrt();
    if mu.norm() < 1e-12 {
        return Err(Error::InvalidInput(format!("z = {z} is a branch point of the exponential basis")));
    }
    let k = generator(model, z);
    let s = ComplexMatrix::from_column_slice(2, 1, s0);
    let ks = &k * &s / mu;
    let plus: Vec<Complex64> = (0..2).map(|i| (s[(i, 0)] + ks[(i, 0)]) / 2.0).collect();
    let minus: Vec<Complex64> = (0..2).map(|i| (s[(i, 0)] - ks[(i, 0)]) / 2.0).collect();
    let mut out = ExpSum::term(mu, plus);
    out.add(&ExpSum::term(-mu, minus));
    Ok(out)
}

/// Applies the differential expression of the model to a value-valued sum.
pub fn apply_expression(model: ModelKind, f: &ExpSum) -> ExpSum {
    match model {
        ModelKind::Momentum => f.derivative().scaled(-I),
        ModelKind::Schroedinger => f.derivative().derivative().scaled(c(-1.0, 0.0)),
        ModelKind::Dirac { c: cc } => {
            let m = cc * cc / 2.0;
            let fp = f.derivative();
            let mut out = ExpSum::zero(2);
            for (t, tp) in f.terms.iter().zip(&fp.terms) {
                let v = vec![-I * cc * tp.coeff[1] + m * t.coeff[0], -I * cc * tp.coeff[0] - m * t.coeff[1]];
                out.add(&ExpSum::term(t.rate, v));
            }
            out
        }
    }
}

/// Trace vector `(state(0), state(d))` of a value-valued function.
pub fn state_trace(model: ModelKind, f: &ExpSum, d: f64) -> ComplexMatrix {
    let state = |t: f64| -> Vec<Complex64> {
        match model {
            ModelKind::Schroedinger => vec![f.eval(t)[0], f.derivative().eval(t)[0]],
            _ => f.eval(t),
        }
    };
    let mut v = state(0.0);
    v.extend(state(d));
    ComplexMatrix::from_column_slice(v.len(), 1, &v)
}

/// Defect element of one interval with prescribed `Gamma_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectSolution {
    pub z: Complex64,
    /// State at the left end; the coefficients in the fundamental system `exp(K t)`.
    pub initial_state: Vec<Complex64>,
    pub gamma0: ComplexMatrix,
    pub gamma1: ComplexMatrix,
    /// Function values on `[0, d]`.
    pub values: ExpSum,
}

fn trace_operator(model: ModelKind, d: f64, z: Complex64) -> ComplexMatrix {
    vstack(&[&identity(model.state_dim()), &transfer(model, z, d)])
}

/// Solves `l f = z f` on `[0, d]` with `Gamma_0 f = h` under the given maps.
pub fn defect_solution(
    model: ModelKind,
    maps: &BoundaryMaps,
    d: f64,
    z: Complex64,
    h: &[Complex64],
) -> Result<DefectSolution> {
    let t = trace_operator(model, d, z);
    let a = &maps.gamma0 * &t;
    let rhs = ComplexMatrix::from_column_slice(h.len(), 1, h);
    let s0 = solve(&a, &rhs).map_err(|_| Error::EigenvalueHit { lambda: z })?;
    let gamma0 = &a * &s0;
    let gamma1 = &maps.gamma1 * &t * &s0;
    let init: Vec<Complex64> = s0.iter().copied().collect();
    let state = homogeneous(model, z, &init)?;
    let proj = value_projection(model);
    let mut values = ExpSum::zero(model.value_dim());
    for term in &state.terms {
        let v = &proj * ComplexMatrix::from_column_slice(term.coeff.len(), 1, &term.coeff);
        values.add(&ExpSum::term(term.rate, v.iter().copied().collect()));
    }
    Ok(DefectSolution { z, initial_state: init, gamma0, gamma1, values })
}

/// Weyl block computed from the maps and the propagator: `Gamma_1 T (Gamma_0 T)^{-1}`.
pub fn weyl_from_maps(model: ModelKind, maps: &BoundaryMaps, d: f64, z: Complex64) -> Result<ComplexMatrix> {
    let t = trace_operator(model, d, z);
    let a = &maps.gamma0 * &t;
    let b = &maps.gamma1 * &t;
    let at = a.transpose();
    Ok(solve(&at, &b.transpose()).map_err(|_| Error::EigenvalueHit { lambda: z })?.transpose())
}

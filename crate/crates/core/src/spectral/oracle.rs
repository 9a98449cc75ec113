use super::{check_interval, Cutoff, SpectrumResult};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::models::ModelKind;
use crate::numerics::{bracket_roots, Tolerance};

/// `cos(sqrt(s) t)` and `sin(sqrt(s) t)/sqrt(s)` for real `s` of either sign.
fn trig_pair(s: f64, t: f64) -> (f64, f64) {
    if s >= 0.0 {
        let w = s.sqrt();
        let x = w * t;
        (x.cos(), if x.abs() < 1e-8 { t } else { x.sin() / w })
    } else {
        let w = (-s).sqrt();
        let x = w * t;
        (x.cosh(), if x.abs() < 1e-8 { t } else { x.sinh() / w })
    }
}

/// Propagates a real two-component state across the lattice and returns the
/// endpoint functional. Schroedinger uses `(f, f')`, Dirac uses `(f_1, i c f_2)`;
/// both see the jump `[[1, 0], [alpha, 1]]` at interior points.
fn shoot(model: ModelKind, spacings: &[f64], alpha: &[f64], cutoff: Cutoff, lambda: f64) -> f64 {
    let (mut y, end_component) = match cutoff {
        Cutoff::DirichletEnd => ([0.0, 1.0], 0),
        Cutoff::NeumannEnd => ([1.0, 0.0], 1),
        Cutoff::DiracHardWall => ([0.0, 1.0], 1),
        Cutoff::Periodic => unreachable!(),
    };
    for (n, &d) in spacings.iter().enumerate() {
        y = match model {
            ModelKind::Schroedinger => {
                let (cs, sn) = trig_pair(lambda, d);
                [cs * y[0] + sn * y[1], -lambda * sn * y[0] + cs * y[1]]
            }
            ModelKind::Dirac { c } => {
                // f_1' = (lambda + m) g / c^2, g' = -(lambda - m) f_1.
                let m = c * c / 2.0;
                let (cs, sn) = trig_pair((lambda * lambda - m * m) / (c * c), d);
                [cs * y[0] + (lambda + m) / (c * c) * sn * y[1], -(lambda - m) * sn * y[0] + cs * y[1]]
            }
            ModelKind::Momentum => unreachable!(),
        };
        if let Some(a) = alpha.get(n) {
            y[1] += a * y[0];
        }
        // Rescaling keeps the sign and avoids overflow on long lattices.
        let norm = y[0].abs().max(y[1].abs());
        if norm > 1e100 {
            y = [y[0] / norm, y[1] / norm];
        }
    }
    y[end_component]
}

/// Eigenvalues by exact interval propagators and interface jumps, independent
/// of the boundary-triple machinery.
pub fn shooting_oracle(
    model: ModelKind,
    lattice: &LatticeSpec,
    interactions: &[f64],
    cutoff: Cutoff,
    interval: (f64, f64),
    grid: usize,
    tol: Tolerance,
) -> Result<SpectrumResult> {
    model.validate()?;
    cutoff.check(model)?;
    check_interval(interval.0, interval.1, grid)?;
    let n = lattice.len();
    if interactions.len() + 1 != n {
        return Err(Error::LengthMismatch { expected: n - 1, found: interactions.len() });
    }
    let spacings = lattice.spacings();
    let scan = match model {
        ModelKind::Momentum => {
            let length: f64 = spacings.iter().sum();
            let total: f64 = interactions.iter().sum();
            bracket_roots(|x| ((x * length + total) / 2.0).sin(), interval.0, interval.1, grid, &[], 0.0, tol)?
        }
        _ => bracket_roots(
            |x| shoot(model, &spacings, interactions, cutoff, x),
            interval.0,
            interval.1,
            grid,
            &[],
            0.0,
            tol,
        )?,
    };
    Ok(SpectrumResult::from_scan("shooting", scan, interval, grid, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::new(0.0, 1e-9).unwrap()
    }

    #[test]
    fn free_box_schroedinger() {
        let l = LatticeSpec::explicit(vec![0.7, 1.3, 1.0]).unwrap();
        let r =
            shooting_oracle(ModelKind::Schroedinger, &l, &[0.0, 0.0], Cutoff::DirichletEnd, (0.1, 12.0), 300, tol())
                .unwrap();
        let ev = r.eigenvalues();
        for (k, x) in ev.iter().enumerate() {
            assert!((x - (PI * (k + 1) as f64 / 3.0).powi(2)).abs() < 1e-9);
        }
        assert_eq!(ev.len(), 3);
    }

    #[test]
    fn free_dirac_box() {
        let (c, d) = (1.0, 2.0);
        let l = LatticeSpec::explicit(vec![d]).unwrap();
        let r =
            shooting_oracle(ModelKind::Dirac { c }, &l, &[], Cutoff::DiracHardWall, (-8.0, 8.0), 800, tol()).unwrap();
        let mut expected = Vec::new();
        for j in 0..10 {
            let e = ((c * PI * (j as f64 + 0.5) / d).powi(2) + c.powi(4) / 4.0).sqrt();
            expected.extend([-e, e]);
        }
        expected.retain(|x| x.abs() < 8.0);
        expected.sort_by(f64::total_cmp);
        let ev = r.eigenvalues();
        assert_eq!(ev.len(), expected.len());
        for (a, b) in ev.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

use super::BoundaryCondition;
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::models::{
    boundary_maps, defect_solution, forcing, generator, homogeneous, transfer, value_projection, weyl_block,
    DefectSolution, ModelKind,
};
use crate::numerics::{identity, solve, vstack, zeros, Complex64, ComplexMatrix, ExpSum};

fn column(v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_column_slice(v.len(), 1, v)
}

fn project(model: ModelKind, state: &ExpSum) -> ExpSum {
    let p = value_projection(model);
    let mut out = ExpSum::zero(model.value_dim());
    for t in &state.terms {
        out.add(&ExpSum::term(t.rate, (&p * column(&t.coeff)).iter().copied().collect()));
    }
    out
}

fn check_pieces(lattice: &LatticeSpec, model: ModelKind, f: &[ExpSum]) -> Result<()> {
    if f.len() != lattice.len() {
        return Err(Error::LengthMismatch { expected: lattice.len(), found: f.len() });
    }
    if let Some(p) = f.iter().find(|p| p.dim != model.value_dim()) {
        return Err(Error::DimensionMismatch { expected: model.value_dim(), found: p.dim });
    }
    Ok(())
}

fn with_block<T>(n: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::PoleProximity { z, distance, .. } => Error::PoleProximity { z, distance, block: Some(n) },
        other => other,
    })
}

/// `(A_0 - lambda)^{-1} f` on one interval, `A_0 = ker Gamma_0`.
fn a0_piece(model: ModelKind, d: f64, lambda: Complex64, f: &ExpSum) -> Result<ExpSum> {
    let s = model.state_dim();
    let k = generator(model, lambda);
    let b = forcing(model);
    // Particular solution with the rates of f: (beta - K) v = B c.
    let mut particular = ExpSum::zero(s);
    for t in &f.terms {
        let lhs = identity(s) * t.rate - &k;
        let v = solve(&lhs, &(&b * column(&t.coeff)))
            .map_err(|_| Error::InvalidInput(format!("rate {} resonates with the spectral parameter", t.rate)))?;
        particular.add(&ExpSum::term(t.rate, v.iter().copied().collect()));
    }
    let maps = boundary_maps(model);
    let mut trace_p = particular.eval(0.0);
    trace_p.extend(particular.eval(d));
    let fundamental = vstack(&[&identity(s), &transfer(model, lambda, d)]);
    let a = &maps.gamma0 * fundamental;
    let rhs = -(&maps.gamma0 * column(&trace_p));
    let s0 = solve(&a, &rhs).map_err(|_| Error::EigenvalueHit { lambda })?;
    let mut state = particular;
    let init: Vec<Complex64> = s0.iter().copied().collect();
    if init.iter().any(|x| x.norm() > 0.0) {
        state.add(&homogeneous(model, lambda, &init)?);
    }
    Ok(project(model, &state))
}

/// `(A_0 - lambda)^{-1} f` for piecewise data, `f[n-1]` living on `[0, d_n]`.
pub fn a0_resolvent(model: ModelKind, lattice: &LatticeSpec, lambda: Complex64, f: &[ExpSum]) -> Result<Vec<ExpSum>> {
    model.validate()?;
    check_pieces(lattice, model, f)?;
    (1..=lattice.len())
        .map(|n| {
            let d = lattice.spacing(n);
            with_block(n, weyl_block(model, d, lambda))?;
            a0_piece(model, d, lambda, &f[n - 1])
        })
        .collect()
}

/// `sum_n int <f_n, g_n>`, linear in `f`.
pub fn pieces_inner(lattice: &LatticeSpec, f: &[ExpSum], g: &[ExpSum]) -> Complex64 {
    f.iter().zip(g).enumerate().map(|(k, (a, b))| a.inner(b, lattice.spacing(k + 1))).sum()
}

/// Defect elements `gamma(lambda) e_j` block by block.
fn gamma_columns(model: ModelKind, lattice: &LatticeSpec, lambda: Complex64) -> Result<Vec<Vec<DefectSolution>>> {
    let h = model.boundary_dim();
    let maps = boundary_maps(model);
    (1..=lattice.len())
        .map(|n| {
            let d = lattice.spacing(n);
            with_block(n, weyl_block(model, d, lambda))?;
            (0..h)
                .map(|j| {
                    let mut e = vec![Complex64::from(0.0); h];
                    e[j] = Complex64::from(1.0);
                    defect_solution(model, &maps, d, lambda, &e)
                })
                .collect()
        })
        .collect()
}

/// `(A_Theta - lambda)^{-1} f = (A_0 - lambda)^{-1} f + gamma(lambda) X gamma(conj lambda)^* f`
/// with `X = -(C_0 + C_1 M(lambda))^{-1} C_1`.
pub fn krein_resolvent_apply(
    model: ModelKind,
    lattice: &LatticeSpec,
    theta: &BoundaryCondition,
    lambda: Complex64,
    f: &[ExpSum],
) -> Result<Vec<ExpSum>> {
    let h = model.boundary_dim();
    let dim = h * lattice.len();
    if theta.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: theta.dim() });
    }
    let mut out = a0_resolvent(model, lattice, lambda, f)?;
    let gam = gamma_columns(model, lattice, lambda)?;
    let gam_bar = gamma_columns(model, lattice, lambda.conj())?;

    let mut m = zeros(dim, dim);
    let mut p = zeros(dim, 1);
    for (b, (cols, cols_bar)) in gam.iter().zip(&gam_bar).enumerate() {
        let d = lattice.spacing(b + 1);
        for (j, (sol, sol_bar)) in cols.iter().zip(cols_bar).enumerate() {
            m.view_mut((b * h, b * h + j), (h, 1)).copy_from(&sol.gamma1);
            p[(b * h + j, 0)] = f[b].inner(&sol_bar.values, d);
        }
    }
    let x = theta.resolvent_factor(&m, lambda)?;
    let coeff = x * p;
    for (b, cols) in gam.iter().enumerate() {
        for (j, sol) in cols.iter().enumerate() {
            out[b].add(&sol.values.scaled(coeff[(b * h + j, 0)]));
        }
    }
    Ok(out)
}

/// `<(A_Theta - lambda)^{-1} f, g>`.
pub fn krein_resolvent_element(
    model: ModelKind,
    lattice: &LatticeSpec,
    theta: &BoundaryCondition,
    lambda: Complex64,
    f: &[ExpSum],
    g: &[ExpSum],
) -> Result<Complex64> {
    check_pieces(lattice, model, g)?;
    let u = krein_resolvent_apply(model, lattice, theta, lambda, f)?;
    Ok(pieces_inner(lattice, &u, g))
}

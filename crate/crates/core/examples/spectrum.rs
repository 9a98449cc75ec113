//! Eigenvalues of point-interaction lattices by determinant scan and by shooting.

use boundary_triples::lattice::LatticeSpec;
use boundary_triples::models::ModelKind;
use boundary_triples::numerics::Tolerance;
use boundary_triples::spectral::{build_theta, det_scan, shooting_oracle, Cutoff};

fn main() -> boundary_triples::Result<()> {
    let tol = Tolerance::new(0.0, 1e-10)?;
    let runs = [
        (ModelKind::Schroedinger, 10, 2.0, Cutoff::DirichletEnd, (-5.0, 40.0)),
        (ModelKind::Dirac { c: 1.0 }, 5, 1.0, Cutoff::DiracHardWall, (-8.0, 8.0)),
        (ModelKind::Momentum, 4, 0.7, Cutoff::Periodic, (-10.0, 10.0)),
    ];
    for (model, n, a, cutoff, interval) in runs {
        let lattice = LatticeSpec::constant(1.0, n)?;
        let alpha = vec![a; n - 1];
        let theta = build_theta(model, &lattice, &alpha, cutoff)?;
        let scan = det_scan(model, &lattice, &theta, interval, 6000, tol)?.eigenvalues();
        let shoot = shooting_oracle(model, &lattice, &alpha, cutoff, interval, 6000, tol)?.eigenvalues();
        let diff = scan.iter().zip(&shoot).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        println!("{} N={n} alpha={a}: {} eigenvalues, max difference {diff:.1e}", model.name(), scan.len());
        println!("  {:?}", scan.iter().map(|x| format!("{x:.8}")).collect::<Vec<_>>());
    }
    Ok(())
}

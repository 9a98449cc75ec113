//! Resolvent of a Schroedinger point-interaction lattice through the Krein formula.

use boundary_triples::lattice::LatticeSpec;
use boundary_triples::models::ModelKind;
use boundary_triples::numerics::{c, ExpSum};
use boundary_triples::spectral::{build_theta, krein_resolvent_apply, krein_resolvent_element, Cutoff};

fn main() -> boundary_triples::Result<()> {
    let lattice = LatticeSpec::explicit(vec![0.5, 1.0, 0.75])?;
    let theta = build_theta(ModelKind::Schroedinger, &lattice, &[1.5, -0.5], Cutoff::NeumannEnd)?;
    let lambda = c(3.0, 0.5);
    // f = 1 on each interval.
    let f: Vec<ExpSum> = (0..3).map(|_| ExpSum::scalar(c(0.0, 0.0), c(1.0, 0.0))).collect();
    let u = krein_resolvent_apply(ModelKind::Schroedinger, &lattice, &theta, lambda, &f)?;
    for (k, piece) in u.iter().enumerate() {
        let d = lattice.spacing(k + 1);
        println!("interval {}: u(0) = {:.6}, u(d) = {:.6}", k + 1, piece.eval(0.0)[0], piece.eval(d)[0]);
    }
    let form = krein_resolvent_element(ModelKind::Schroedinger, &lattice, &theta, lambda, &f, &f)?;
    println!("<(H - lambda)^-1 f, f> = {form:.10}");
    Ok(())
}

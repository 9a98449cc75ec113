//! Titchmarsh-Weyl coefficient of a half-line problem with a step potential.

use boundary_triples::mfunction::{m_function, PotentialPiece, SLProblem};
use boundary_triples::numerics::c;

fn main() -> boundary_triples::Result<()> {
    let p = SLProblem::new(vec![PotentialPiece { length: 1.0, q: 4.0 }, PotentialPiece { length: 49.0, q: 0.0 }])?;
    for lambda in [c(0.0, 1.0), c(-1.0, 0.0), c(4.0, 3.0)] {
        let v = m_function(&p, lambda)?;
        println!("lambda = {lambda}: m = {:.10}, disk radius {:.1e}", v.m, v.radius);
    }
    let lambda = c(2.0, 0.2);
    for len in [2.0, 5.0, 10.0, 20.0, 50.0] {
        let v = m_function(&p.truncated(len), lambda)?;
        println!("L = {len:>4}: m = {:.10}, radius {:.3e}", v.m, v.radius);
    }
    Ok(())
}

//! Weyl functions of the momentum, Schroedinger and Dirac interval models.

use boundary_triples::models::{weyl_block, weyl_block_dz, ModelKind};
use boundary_triples::numerics::{c, I};

fn main() -> boundary_triples::Result<()> {
    for d in [0.01, 1.0, 10.0] {
        let m = weyl_block(ModelKind::Momentum, d, I)?[(0, 0)];
        println!("momentum d = {d:>5}: M(i) = {m:.6}, i coth(d/2) = {:.6}", 1.0 / (d / 2.0).tanh());
    }

    let z = c(2.0, 1.0);
    let m = weyl_block(ModelKind::Schroedinger, 0.7, z)?;
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    println!("schroedinger d = 0.7, z = {z}: det M = {det:.12}, -1/z = {:.12}", -1.0 / z);

    let dirac = ModelKind::Dirac { c: 1.0 };
    let m0 = weyl_block(dirac, 1.0, c(0.0, 0.0))?;
    let dm0 = weyl_block_dz(dirac, 1.0, c(0.0, 0.0))?;
    println!("dirac d = 1: M(0) =\n{m0:.6}M'(0) =\n{dm0:.6}");
    println!("det M(0) = {:.12}", m0[(0, 0)] * m0[(1, 1)] - m0[(0, 1)] * m0[(1, 0)]);
    Ok(())
}

//! Krein-space side of boundary maps: unitarity, the main transform and the
//! Cayley transform of a Weyl function.

use boundary_triples::krein::{
    cayley_to_contraction, contraction_to_weyl, main_transform, random_krein_unitary, FiniteTriple, Relation,
};
use boundary_triples::numerics::{c, operator_norm, rel_diff};
use boundary_triples::ryzhov::{RandomOptions, RyzhovTriple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> boundary_triples::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = random_krein_unitary(2, 0.7, &mut rng);
    let t = FiniteTriple::from_operator(&g)?;
    println!("Green residual {:.1e}, unitary {}", t.green_residual(), t.is_unitary());
    println!("main transform selfadjoint: {}", main_transform(&t).is_selfadjoint_relation());

    let mut bad = g.clone();
    bad.row_mut(0).scale_mut(1.5);
    let t = FiniteTriple::from_operator(&bad)?;
    println!(
        "after rescaling a row: unitary {}, selfadjoint {}",
        t.is_unitary(),
        main_transform(&t).is_selfadjoint_relation()
    );

    let s = RyzhovTriple::random(4, 3, RandomOptions::default(), &mut rng);
    let m = s.weyl(c(1.0, 2.0))?;
    let theta = cayley_to_contraction(&m)?;
    println!("||theta|| = {:.6}", operator_norm(&theta));
    println!("round trip error {:.1e}", rel_diff(&contraction_to_weyl(&theta)?, &m));
    Ok(())
}

//! Finite sandbox triple: Weyl function, gamma field, extensions and the
//! Krein resolvent formula against a direct inverse.

use boundary_triples::krein::{Relation, Subspace};
use boundary_triples::numerics::{c, hermitian_eigenvalues, max_abs, r, rel_diff, ComplexMatrix};
use boundary_triples::ryzhov::{RandomOptions, RyzhovTriple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> boundary_triples::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let t = RyzhovTriple::random(5, 2, RandomOptions { positive_a0: true, nonpositive_e: true }, &mut rng);
    println!("state dim {}, boundary dim {}", t.state_dim(), t.boundary_dim());

    let lambda = c(0.5, 1.0);
    let m = t.weyl(lambda)?;
    let im = (&m - m.adjoint()) / c(0.0, 2.0);
    println!("M({lambda}) =\n{m:.4}");
    println!("eigenvalues of Im M: {:?}", hermitian_eigenvalues(&im)?);
    let generic = t.to_finite_triple().weyl(lambda);
    println!("closed form vs assembled triple: {:.1e}", rel_diff(generic.matrix()?, &m));

    // Extension with a Hermitian boundary parameter.
    let b = ComplexMatrix::from_row_slice(2, 2, &[r(1.0), c(0.0, 0.5), c(0.0, -0.5), r(-2.0)]);
    let ext = t.extension(&b)?;
    println!("extension selfadjoint: {}", ext.is_selfadjoint_relation());
    let formula = t.to_finite_triple().krein_resolvent(&Subspace::graph(&b), lambda)?;
    let direct = ext.resolvent(lambda)?;
    println!("Krein formula vs direct resolvent: {:.1e}", max_abs(&(formula - direct)));

    // Sign checks on the negative half-line.
    for x in [-0.1, -1.0, -10.0] {
        let top = *hermitian_eigenvalues(&t.weyl(r(x))?)?.last().unwrap();
        let bottom = hermitian_eigenvalues(&t.tilde_weyl(r(x))?)?[0];
        println!("x = {x:>5}: max eig M = {top:.4}, min eig tilde = {bottom:.4}");
    }
    Ok(())
}

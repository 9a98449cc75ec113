//! Finite-dimensional boundary triples.
//!
//! A triple is stored as the graph of `Gamma`: a subspace of
//! `C^{2m} (+) C^{2h}` whose vectors read `(f, f', Gamma_0 f^, Gamma_1 f^)`.
//! Both sides carry the Krein form `[x, y] = (J x, y)` with
//! `J = [[0, -iI], [iI, 0]]`, so the Green identity is the statement that the
//! graph is neutral for `diag(J_m, -J_h)`.

mod subspace;
mod triple;

pub use subspace::{Relation, Subspace};
pub use triple::{
    cayley_point, cayley_to_contraction, contraction_to_weyl, krein_adjoint, krein_adjoint_matrix, main_transform,
    random_krein_unitary, real_point_certificate, weyl_form, FiniteTriple, FundamentalSymmetry, RealPointCertificate,
    WeylValue,
};

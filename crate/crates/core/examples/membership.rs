//! Weighted-sequence membership and renormalized lattices.

use boundary_triples::lattice::{
    membership, renormalize, BlockFamily, BlockTransform, LatticeSpec, MembershipTarget, PowerLaw, WeightedSequence,
};
use boundary_triples::models::ModelKind;
use boundary_triples::numerics::{c, I};

fn main() -> boundary_triples::Result<()> {
    let lattice = LatticeSpec::one_over_n(10_000);
    let schr = BlockFamily::base(ModelKind::Schroedinger);
    for exponent in [1.0, 1.5, 2.0] {
        let seq = WeightedSequence::power_law_pair(PowerLaw::new(1.0, exponent), PowerLaw::new(0.0, 0.0));
        for target in [MembershipTarget::DomM, MembershipTarget::RanGamma0, MembershipTarget::FormDomain] {
            let r = membership(&schr, &lattice, &seq, target)?;
            println!("a_n = n^-{exponent}, b_n = 0, {target:?}: member {} (weight d^-{})", r.member, r.weight_power);
        }
    }

    let ren = renormalize(ModelKind::Momentum, &lattice, BlockTransform::DiagSqrt)?;
    let im: Vec<f64> = ren.weyl(I)?.blocks.iter().map(|b| b[(0, 0)].im).collect();
    let (lo, hi) = im.iter().fold((f64::MAX, f64::MIN), |(a, b), x| (a.min(*x), b.max(*x)));
    println!("momentum sqrt-renormalized Im blocks at i: [{lo:.6}, {hi:.6}]");

    let dirac =
        renormalize(ModelKind::Dirac { c: 1.0 }, &LatticeSpec::explicit(vec![0.01])?, BlockTransform::DiracTilde)?;
    println!("Dirac tilde block at d = 0.01, z = 1+i:\n{:.6}", dirac.block(1, c(1.0, 1.0))?);
    Ok(())
}

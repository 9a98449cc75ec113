//! Classification of direct sums of interval triples over lattices.

use boundary_triples::lattice::{classify, BlockFamily, BlockTransform, LatticeSpec};
use boundary_triples::models::ModelKind;

fn main() -> boundary_triples::Result<()> {
    let shrinking = LatticeSpec::one_over_n(10_000);
    let uniform = LatticeSpec::constant(1.0, 1000)?;
    let cases = [
        (BlockFamily::base(ModelKind::Schroedinger), &shrinking, None),
        (BlockFamily::base(ModelKind::Schroedinger).transposed(), &shrinking, Some(-1.0)),
        (
            BlockFamily::new(ModelKind::Schroedinger, vec![BlockTransform::SchrodingerRegularized])?,
            &shrinking,
            Some(-1.0),
        ),
        (BlockFamily::base(ModelKind::Dirac { c: 1.0 }), &shrinking, None),
        (BlockFamily::base(ModelKind::Dirac { c: 1.0 }), &uniform, Some(0.0)),
        (BlockFamily::base(ModelKind::Momentum).transposed(), &shrinking, None),
    ];
    for (family, lattice, gap) in cases {
        let r = classify(&family, lattice, gap)?;
        let sups: Vec<String> = r.constants.iter().map(|s| format!("{}={:.3e}", s.name, s.sup)).collect();
        println!("{:<40} N={:<6} {:<24} {}", r.family, r.n, r.verdict_label, sups.join(" "));
    }
    Ok(())
}

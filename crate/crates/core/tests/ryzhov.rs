mod common;

use boundary_triples::numerics::{
    c, hermitian_eigenvalues, identity, max_abs, operator_norm, r, rel_diff, zeros, Complex64, ComplexMatrix, I,
};
use boundary_triples::ryzhov::{from_json, RandomOptions, RyzhovTriple};
use boundary_triples::Error;
use common::{random_hermitian, random_sandbox, rng};
use rand::Rng;

fn hermitian_residual(m: &ComplexMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn spectrum(m: &ComplexMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * r(0.5);
    hermitian_eigenvalues(&h).unwrap()
}

#[test]
fn closed_form_matches_assembled_triple() {
    for seed in 0..10 {
        let t = random_sandbox(seed, RandomOptions::default());
        let ft = t.to_finite_triple();
        let mut g = rng(seed + 50);
        for _ in 0..10 {
            let l = c(g.gen_range(-4.0..4.0), g.gen_range(-4.0..4.0));
            if l.im.abs() < 1e-3 {
                continue;
            }
            assert!(rel_diff(ft.weyl(l).matrix().unwrap(), &t.weyl(l).unwrap()) < 1e-9);
            assert!(max_abs(&(t.weyl(l.conj()).unwrap() - t.weyl(l).unwrap().adjoint())) < 1e-12);
        }
    }
}

#[test]
fn scalar_closed_forms() {
    let t = RyzhovTriple::new(identity(1), identity(1), zeros(1, 1)).unwrap();
    for l in [c(0.5, 1.0), c(-2.0, 0.3), c(3.0, -1.0)] {
        let m = t.weyl(l).unwrap()[(0, 0)];
        assert!((m - l / (1.0 - l)).norm() < 1e-14);
    }
    let tilde = t.tilde_weyl(c(-1.0, 0.0)).unwrap()[(0, 0)];
    assert!((tilde - c(2.0, 0.0)).norm() < 1e-14);
    assert_eq!(t.tilde_weyl(c(0.0, 0.0)), Err(Error::ZeroLambda));
    assert!(matches!(t.weyl(c(1.0, 0.0)), Err(Error::ResolventPole { .. })));
}

#[test]
fn stieltjes_signs_on_the_negative_axis() {
    let opts = RandomOptions { positive_a0: true, nonpositive_e: true };
    for seed in 0..20 {
        let t = random_sandbox(seed, opts);
        for x in [-0.1, -1.0, -10.0] {
            let m = t.weyl(r(x)).unwrap();
            assert!(hermitian_residual(&m) < 1e-12 * operator_norm(&m).max(1.0));
            assert!(
                *spectrum(&m).last().unwrap() <= 1e-12 * operator_norm(&m).max(1.0),
                "seed {seed}: M({x}) not <= 0"
            );
            let w = t.tilde_weyl(r(x)).unwrap();
            assert!(hermitian_residual(&w) < 1e-9 * operator_norm(&w).max(1.0));
            assert!(spectrum(&w)[0] >= -1e-10 * operator_norm(&w).max(1.0), "seed {seed}: tilde({x}) not >= 0");
        }
    }
}

#[test]
fn tilde_transform_is_an_involution_on_m0() {
    for seed in 0..10 {
        let t = random_sandbox(seed, RandomOptions::default());
        let l = c(0.7, 1.1);
        let w = t.tilde_weyl(l).unwrap();
        let back = -w.try_inverse().unwrap();
        assert!(rel_diff(&back, &t.m0(l).unwrap()) < 1e-10);
    }
}

#[test]
fn tilde_blows_up_near_zero() {
    let t = random_sandbox(3, RandomOptions { positive_a0: true, nonpositive_e: false });
    let norms: Vec<f64> = [-1e-2, -1e-4, -1e-6].iter().map(|x| operator_norm(&t.tilde_weyl(r(*x)).unwrap())).collect();
    assert!(norms[1] > 50.0 * norms[0] && norms[2] > 50.0 * norms[1]);
}

#[test]
fn schur_blocks_reassemble_and_renormalize() {
    for seed in 0..10 {
        let mut g = rng(seed + 70);
        let m = g.gen_range(3..=6);
        let h = g.gen_range(1..m);
        let t = RyzhovTriple::random(m, h, RandomOptions::default(), &mut g);
        let l = c(1.0, 1.0);
        let s = t.schur_renormalize(l).unwrap();
        let q = boundary_triples::numerics::hstack(&[&s.range_basis, &s.complement_basis]);
        let blocks = boundary_triples::numerics::vstack(&[
            &boundary_triples::numerics::hstack(&[&s.a11, &s.a21.adjoint()]),
            &boundary_triples::numerics::hstack(&[&s.a21, &s.a22]),
        ]);
        assert!(rel_diff(&(&q * blocks * q.adjoint()), t.a0inv()) < 1e-10, "seed {seed}");
        // The Schur complement is a Nevanlinna sample at 1 + i.
        let im = (&s.s0 - s.s0.adjoint()) / c(0.0, 2.0);
        assert!(spectrum(&im)[0] >= -1e-10, "seed {seed}");
        assert!(s.nevanlinna_sample(boundary_triples::numerics::Tolerance::psd()).unwrap().is_psd);
    }
}

#[test]
fn decoupled_schur_complement() {
    let a = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![r(0.5), r(2.0), r(-1.0)]));
    let g = ComplexMatrix::from_fn(3, 1, |i, _| if i == 0 { r(1.0) } else { r(0.0) });
    let t = RyzhovTriple::new(a, g, zeros(1, 1)).unwrap();
    let l = c(0.3, 0.8);
    let s = t.schur_renormalize(l).unwrap();
    assert!((s.s0[(0, 0)] - (r(0.5) - 1.0 / l)).norm() < 1e-12);
}

#[test]
fn domain_invariance_probe() {
    // ran G invariant under A0inv: angle zero.
    let a = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![r(0.5), r(2.0), r(-1.0), r(3.0)]));
    let g = ComplexMatrix::from_fn(4, 2, |i, j| if i == j { r(1.0) } else { r(0.0) });
    let t = RyzhovTriple::new(a, g, zeros(2, 2)).unwrap();
    let p = t.domain_invariance_probe(c(0.2, 1.0), c(-1.0, 0.5)).unwrap();
    assert!(p.projected_angle < 1e-10 && p.unprojected_angle < 1e-10);

    // Generic rank-deficient G: ranges move.
    let mut g = rng(11);
    let a = random_hermitian(5, &mut g) + identity(5) * r(3.0);
    let gm = ComplexMatrix::from_fn(5, 2, |_, _| c(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)));
    let t = RyzhovTriple::new(a.try_inverse().unwrap(), gm, zeros(2, 2)).unwrap();
    let p = t.domain_invariance_probe(c(0.2, 1.0), c(-1.0, 0.5)).unwrap();
    assert!(p.unprojected_angle > 0.1, "{p:?}");

    // Square invertible G: both ranges are everything.
    let t = random_sandbox(5, RandomOptions::default());
    if t.boundary_dim() == t.state_dim() {
        let p = t.domain_invariance_probe(I, c(2.0, -1.0)).unwrap();
        assert!(p.unprojected_angle < 1e-10);
    }
}

#[test]
fn json_round_trip_and_validation() {
    let t = random_sandbox(9, RandomOptions::default());
    let s = serde_json::to_string(&t).unwrap();
    let back = from_json(&s).unwrap();
    assert_eq!(back, t);
    // Non-Hermitian E is rejected.
    let bad = r#"{"A0inv":[[[1,0]]],"G":[[[1,0]]],"E":[[[0,1]]]}"#;
    assert!(from_json(bad).is_err());
    let zero_g = r#"{"A0inv":[[[1,0]]],"G":[[[0,0]]],"E":[[[0,0]]]}"#;
    assert!(from_json(zero_g).is_err());
}

#[test]
fn random_options_respect_signs() {
    let opts = RandomOptions { positive_a0: true, nonpositive_e: true };
    for seed in 0..10 {
        let t = random_sandbox(seed, opts);
        assert!(spectrum(t.a0inv())[0] > 0.0);
        assert!(*spectrum(t.e()).last().unwrap() <= 1e-14);
        let _: Complex64 = t.weyl(r(-1.0)).unwrap()[(0, 0)];
    }
}

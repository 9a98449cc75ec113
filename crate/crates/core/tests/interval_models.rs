use boundary_triples::models::{
    apply_expression, boundary_maps, defect_solution, state_trace, weyl_block, weyl_block_derivative, weyl_block_dz,
    weyl_from_maps, ModelKind,
};
use boundary_triples::numerics::{
    c, hermitian_eigenvalues, imaginary_part, rel_diff, Complex64, ComplexMatrix, ExpSum,
};
use proptest::prelude::*;

const MODELS: [ModelKind; 4] =
    [ModelKind::Momentum, ModelKind::Schroedinger, ModelKind::Dirac { c: 1.0 }, ModelKind::Dirac { c: 2.5 }];

/// Richardson-extrapolated central difference.
fn richardson(f: impl Fn(f64) -> ComplexMatrix, a: f64, h: f64) -> ComplexMatrix {
    let d1 = (f(a + h) - f(a - h)) / c(2.0 * h, 0.0);
    let d2 = (f(a + h / 2.0) - f(a - h / 2.0)) / c(h, 0.0);
    (d2 * c(4.0, 0.0) - d1) / c(3.0, 0.0)
}

#[test]
fn weyl_from_propagator_matches_closed_form() {
    for model in MODELS {
        let maps = boundary_maps(model);
        for &d in &[0.05, 0.7, 3.0] {
            for &z in &[c(0.3, 1.0), c(-2.0, 0.5), c(4.0, -0.2)] {
                let a = weyl_block(model, d, z).unwrap();
                let b = weyl_from_maps(model, &maps, d, z).unwrap();
                assert!(rel_diff(&a, &b) < 1e-10, "{model:?} d={d} z={z}");
            }
        }
    }
}

fn random_sum(model: ModelKind, rates: &[Complex64], coeffs: &[Complex64]) -> ExpSum {
    let mut f = ExpSum::zero(model.value_dim());
    for (k, &r) in rates.iter().enumerate() {
        let v: Vec<Complex64> = (0..model.value_dim()).map(|j| coeffs[(2 * k + j) % coeffs.len()]).collect();
        f.add(&ExpSum::term(r, v));
    }
    f
}

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// (l f, g) - (f, l g) = (Gamma_1 f, Gamma_0 g) - (Gamma_0 f, Gamma_1 g) with exact interval integrals.
    #[test]
    fn green_identity_exact(
        which in 0usize..4,
        d in 0.05f64..3.0,
        rates_f in proptest::collection::vec(cplx(), 1..4),
        rates_g in proptest::collection::vec(cplx(), 1..4),
        coeffs in proptest::collection::vec(cplx(), 6),
    ) {
        let model = MODELS[which];
        let f = random_sum(model, &rates_f, &coeffs);
        let g = random_sum(model, &rates_g, &coeffs[1..]);
        let lhs = apply_expression(model, &f).inner(&g, d) - f.inner(&apply_expression(model, &g), d);
        let maps = boundary_maps(model);
        let (f0, f1) = maps.apply(&state_trace(model, &f, d));
        let (g0, g1) = maps.apply(&state_trace(model, &g, d));
        let rhs = (g0.adjoint() * &f1)[(0, 0)] - (g1.adjoint() * &f0)[(0, 0)];
        let scale = 1.0 + lhs.norm().max(rhs.norm());
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale, "{lhs} vs {rhs}");
    }

    /// (lambda - mu*) (gamma(lambda) h, gamma(mu) k) = (M(lambda) h, k) - (h, M(mu) k).
    #[test]
    fn defect_norm_identity(
        which in 0usize..4,
        d in 0.05f64..3.0,
        l in cplx(), mu in cplx(),
        h in proptest::collection::vec(cplx(), 2),
        k in proptest::collection::vec(cplx(), 2),
    ) {
        let model = MODELS[which];
        let n = model.boundary_dim();
        let (l, mu) = (c(l.re, l.im.abs() + 0.1), c(mu.re, mu.im.abs() + 0.1));
        let maps = boundary_maps(model);
        let fl = defect_solution(model, &maps, d, l, &h[..n]).unwrap();
        let fm = defect_solution(model, &maps, d, mu, &k[..n]).unwrap();
        let lhs = (l - mu.conj()) * fl.values.inner(&fm.values, d);
        let hv = ComplexMatrix::from_column_slice(n, 1, &h[..n]);
        let kv = ComplexMatrix::from_column_slice(n, 1, &k[..n]);
        let ml = weyl_block(model, d, l).unwrap();
        let mm = weyl_block(model, d, mu).unwrap();
        let rhs = (kv.adjoint() * &ml * &hv)[(0, 0)] - ((&mm * &kv).adjoint() * &hv)[(0, 0)];
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn nevanlinna_on_upper_half_plane(which in 0usize..4, d in 0.01f64..20.0, x in -20.0f64..20.0, y in 0.01f64..20.0) {
        let model = MODELS[which];
        let z = c(x, y);
        let m = weyl_block(model, d, z).unwrap();
        let ev = hermitian_eigenvalues(&imaginary_part(&m).unwrap()).unwrap();
        prop_assert!(ev[0] >= -1e-10 * (1.0 + m.norm()));
        let mc = weyl_block(model, d, z.conj()).unwrap();
        prop_assert!(rel_diff(&mc, &m.adjoint()) < 1e-12);
    }
}

#[test]
fn derivative_matches_richardson() {
    for model in [ModelKind::Schroedinger, ModelKind::Dirac { c: 1.0 }, ModelKind::Dirac { c: 3.0 }] {
        let gap = model.common_gap().unwrap();
        for &d in &[0.01, 0.4, 2.0, 8.0] {
            for &a in &[gap.1 - 0.3, gap.1 - 0.9, -0.2] {
                if a <= gap.0 || a >= gap.1 {
                    continue;
                }
                let exact = weyl_block_derivative(model, d, a).unwrap();
                let fd = richardson(|x| weyl_block(model, d, c(x, 0.0)).unwrap(), a, 1e-3);
                assert!(rel_diff(&exact, &fd) < 1e-8, "{model:?} d={d} a={a}");
            }
        }
    }
    // The complex derivative agrees off the real axis too, including the momentum model.
    for model in MODELS {
        let z = c(0.4, 0.7);
        let exact = weyl_block_dz(model, 1.3, z).unwrap();
        let h = 1e-4;
        let f = |t: f64| weyl_block(model, 1.3, z + t).unwrap();
        assert!(rel_diff(&exact, &richardson(f, 0.0, h)) < 1e-8);
    }
}

#[test]
fn dirac_derivative_at_zero_closed_form() {
    for &cc in &[0.5, 1.0, 2.0] {
        for &d in &[1e-3, 0.3, 5.0] {
            let m = weyl_block_derivative(ModelKind::Dirac { c: cc }, d, 0.0).unwrap();
            let th = (d * cc / 2.0).tanh();
            assert!((m[(0, 0)] - c(2.0 / cc * th, 0.0)).norm() <= 1e-10 * (1.0 + th));
            assert!((m[(1, 1)] - c(2.0 / cc.powi(3) * th, 0.0)).norm() <= 1e-10 * (1.0 + th));
            assert!(m[(0, 1)].norm() <= 1e-12);
        }
    }
}

//! Reference computations shared by the integration tests. They avoid the
//! boundary-triple machinery entirely.

#![allow(dead_code)]

use boundary_triples::numerics::{c, sqrt_upper, Complex64, ComplexMatrix, ExpSum};
use boundary_triples::ryzhov::{RandomOptions, RyzhovTriple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sandbox with `2..=5` state dimensions and `1..=state` boundary dimensions.
pub fn random_sandbox(seed: u64, opts: RandomOptions) -> RyzhovTriple {
    let mut r = rng(seed);
    let m = r.gen_range(2..=5);
    let h = r.gen_range(1..=m);
    RyzhovTriple::random(m, h, opts, &mut r)
}

pub fn random_hermitian(n: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = c(r.gen_range(-2.0..2.0), 0.0);
        for j in i + 1..n {
            let v = c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    a
}

pub fn random_vector(n: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, 1, |_, _| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ends {
    Dirichlet,
    Neumann,
}

/// Solves `-u'' - lambda u = f` on the concatenated intervals with
/// `u' (x_n+) - u'(x_n-) = alpha_n u(x_n)` and the given end conditions, by
/// writing `u_n = particular + A_n e^{ikt} + B_n e^{-ikt}` and imposing all
/// conditions as one linear system. Returns the pieces of `u`.
pub fn schroedinger_bvp(spacings: &[f64], alpha: &[f64], ends: Ends, lambda: Complex64, f: &[ExpSum]) -> Vec<ExpSum> {
    let n = spacings.len();
    assert_eq!(alpha.len() + 1, n);
    let k = sqrt_upper(lambda);
    let ik = c(0.0, 1.0) * k;
    let particular: Vec<ExpSum> = f
        .iter()
        .map(|p| {
            let mut s = ExpSum::zero(1);
            for t in &p.terms {
                let denom = -(t.rate * t.rate) - lambda;
                s.add(&ExpSum::scalar(t.rate, t.coeff[0] / denom));
            }
            s
        })
        .collect();
    let value = |s: &ExpSum, t: f64| -> Complex64 { s.eval(t)[0] };
    let deriv =
        |s: &ExpSum, t: f64| -> Complex64 { s.terms.iter().map(|x| x.rate * x.coeff[0] * (x.rate * t).exp()).sum() };
    // Homogeneous basis values and derivatives at local t.
    let hom = |t: f64| -> [[Complex64; 2]; 2] {
        let (ep, em) = ((ik * t).exp(), (-ik * t).exp());
        [[ep, em], [ik * ep, -ik * em]]
    };

    let size = 2 * n;
    let mut a = ComplexMatrix::zeros(size, size);
    let mut b = ComplexMatrix::zeros(size, 1);
    let mut row = 0;
    // Left end.
    let h0 = hom(0.0);
    let which = if ends == Ends::Dirichlet { 0 } else { 1 };
    a[(row, 0)] = h0[which][0];
    a[(row, 1)] = h0[which][1];
    b[(row, 0)] = -if which == 0 { value(&particular[0], 0.0) } else { deriv(&particular[0], 0.0) };
    row += 1;
    for j in 0..n - 1 {
        let d = spacings[j];
        let hr = hom(d);
        // Continuity: u_j(d) - u_{j+1}(0) = 0.
        a[(row, 2 * j)] = hr[0][0];
        a[(row, 2 * j + 1)] = hr[0][1];
        a[(row, 2 * j + 2)] = -h0[0][0];
        a[(row, 2 * j + 3)] = -h0[0][1];
        b[(row, 0)] = -(value(&particular[j], d) - value(&particular[j + 1], 0.0));
        row += 1;
        // Jump: u'_{j+1}(0) - u'_j(d) - alpha u_j(d) = 0.
        a[(row, 2 * j)] = -hr[1][0] - alpha[j] * hr[0][0];
        a[(row, 2 * j + 1)] = -hr[1][1] - alpha[j] * hr[0][1];
        a[(row, 2 * j + 2)] = h0[1][0];
        a[(row, 2 * j + 3)] = h0[1][1];
        b[(row, 0)] =
            -(deriv(&particular[j + 1], 0.0) - deriv(&particular[j], d) - alpha[j] * value(&particular[j], d));
        row += 1;
    }
    let d = spacings[n - 1];
    let hr = hom(d);
    a[(row, 2 * n - 2)] = hr[which][0];
    a[(row, 2 * n - 1)] = hr[which][1];
    b[(row, 0)] = -if which == 0 { value(&particular[n - 1], d) } else { deriv(&particular[n - 1], d) };

    let sol = a.lu().solve(&b).expect("lambda is not an eigenvalue");
    (0..n)
        .map(|j| {
            let mut u = particular[j].clone();
            u.add(&ExpSum::scalar(ik, sol[(2 * j, 0)]));
            u.add(&ExpSum::scalar(-ik, sol[(2 * j + 1, 0)]));
            u
        })
        .collect()
}

/// `sum_n int u_n conj(g_n)`.
pub fn pieces_form(spacings: &[f64], u: &[ExpSum], g: &[ExpSum]) -> Complex64 {
    u.iter().zip(g).zip(spacings).map(|((a, b), d)| a.inner(b, *d)).sum()
}

/// `<(A - lambda)^{-1} f, f>` for the free Dirichlet box and piecewise-constant
/// `f`, summed over the eigenbasis `sqrt(2/L) sin(k pi x/L)` up to `terms`.
pub fn dirichlet_expansion_form(spacings: &[f64], values: &[Complex64], lambda: Complex64, terms: usize) -> Complex64 {
    let len: f64 = spacings.iter().sum();
    let mut points = vec![0.0];
    for d in spacings {
        points.push(points.last().unwrap() + d);
    }
    let norm = (2.0 / len).sqrt();
    let mut acc = c(0.0, 0.0);
    for k in 1..=terms {
        let w = k as f64 * PI / len;
        let coeff: Complex64 = values
            .iter()
            .enumerate()
            .map(|(j, v)| v * norm * ((w * points[j]).cos() - (w * points[j + 1]).cos()) / w)
            .sum();
        acc += coeff.norm_sqr() / (w * w - lambda);
    }
    acc
}

/// Piecewise-constant data as exponential sums.
pub fn constant_pieces(values: &[Complex64]) -> Vec<ExpSum> {
    values.iter().map(|v| ExpSum::scalar(c(0.0, 0.0), *v)).collect()
}

use super::subspace::{Relation, Subspace};
use crate::error::{Error, Result};
use crate::numerics::{
    identity, inverse, max_abs, null_space_with, operator_norm, pseudo_inverse, smallest_singular_value, vstack, zeros,
    Complex64, ComplexMatrix, Tolerance, I, RANK_CUTOFF,
};
use rand::Rng;

/// `J = [[0, -iI], [iI, 0]]` on `C^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FundamentalSymmetry {
    pub half: usize,
}

impl FundamentalSymmetry {
    pub fn new(half: usize) -> Self {
        Self { half }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let n = self.half;
        let mut j = zeros(2 * n, 2 * n);
        for k in 0..n {
            j[(k, n + k)] = -I;
            j[(n + k, k)] = I;
        }
        j
    }

    /// `[x, y] = y* J x`.
    pub fn form(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
        y.adjoint() * self.matrix() * x
    }
}

/// Krein adjoint of the subspace `T` of `C^{2m} (+) C^{2h}`, returned in
/// `C^{2h} (+) C^{2m}`: all `(k, g)` with `[f, g] = [Tf, k]` for `(f, Tf)` in `T`.
pub fn krein_adjoint(t: &Subspace, dom: FundamentalSymmetry, ran: FundamentalSymmetry) -> Result<Subspace> {
    let (m2, h2) = (2 * dom.half, 2 * ran.half);
    if t.ambient_dim() != m2 + h2 {
        return Err(Error::DimensionMismatch { expected: m2 + h2, found: t.ambient_dim() });
    }
    let perp = t.complement();
    let u = perp.basis().rows(0, m2).into_owned();
    let w = perp.basis().rows(m2, h2).into_owned();
    let g = dom.matrix() * u;
    let k = -(ran.matrix() * w);
    Ok(Subspace::span(&vstack(&[&k, &g])))
}

/// `J_dom Gamma* J_ran` for an everywhere defined matrix `Gamma`.
pub fn krein_adjoint_matrix(
    gamma: &ComplexMatrix,
    dom: FundamentalSymmetry,
    ran: FundamentalSymmetry,
) -> ComplexMatrix {
    dom.matrix() * gamma.adjoint() * ran.matrix()
}

/// Value of the Weyl family at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylValue {
    pub lambda: Complex64,
    /// `M(lambda)` as a relation in `C^h`.
    pub relation: Subspace,
    /// Operator part when `M(lambda)` is an everywhere defined matrix.
    pub operator: Option<ComplexMatrix>,
    pub single_valued: bool,
}

impl WeylValue {
    pub fn matrix(&self) -> Result<&ComplexMatrix> {
        self.operator.as_ref().ok_or(Error::MultivaluedBoundary)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTriple {
    state_dim: usize,
    boundary_dim: usize,
    graph: Subspace,
}

impl FiniteTriple {
    pub fn new(state_dim: usize, boundary_dim: usize, graph: Subspace) -> Result<Self> {
        let expected = 2 * state_dim + 2 * boundary_dim;
        if graph.ambient_dim() != expected {
            return Err(Error::DimensionMismatch { expected, found: graph.ambient_dim() });
        }
        Ok(Self { state_dim, boundary_dim, graph })
    }

    /// Triple spanned by parametrized columns `(f, f', Gamma_0, Gamma_1)`.
    pub fn from_columns(f: &ComplexMatrix, fp: &ComplexMatrix, g0: &ComplexMatrix, g1: &ComplexMatrix) -> Result<Self> {
        let (m, h) = (f.nrows(), g0.nrows());
        for (x, rows) in [(fp, m), (g1, h)] {
            if x.nrows() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: x.nrows() });
            }
        }
        let k = f.ncols();
        for x in [fp, g0, g1] {
            if x.ncols() != k {
                return Err(Error::DimensionMismatch { expected: k, found: x.ncols() });
            }
        }
        Self::new(m, h, Subspace::span(&vstack(&[f, fp, g0, g1])))
    }

    /// Everywhere defined `Gamma: C^{2m} -> C^{2h}` given as a `2h x 2m` matrix.
    pub fn from_operator(gamma: &ComplexMatrix) -> Result<Self> {
        if !gamma.nrows().is_multiple_of(2) || !gamma.ncols().is_multiple_of(2) {
            return Err(Error::InvalidInput("Gamma must map C^{2m} to C^{2h}".into()));
        }
        Self::new(gamma.ncols() / 2, gamma.nrows() / 2, Subspace::graph(gamma))
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn boundary_dim(&self) -> usize {
        self.boundary_dim
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    fn block(&self, start: usize, len: usize) -> ComplexMatrix {
        self.graph.basis().rows(start, len).into_owned()
    }

    /// Basis blocks `(f, f', Gamma_0, Gamma_1)`.
    pub fn blocks(&self) -> [ComplexMatrix; 4] {
        let (m, h) = (self.state_dim, self.boundary_dim);
        [self.block(0, m), self.block(m, m), self.block(2 * m, h), self.block(2 * m + h, h)]
    }

    /// Largest entry of `[x_i, x_j]_state - [Gamma x_i, Gamma x_j]_boundary` over the graph basis.
    pub fn green_residual(&self) -> f64 {
        let (m, h) = (self.state_dim, self.boundary_dim);
        let b = self.graph.basis();
        let s = b.rows(0, 2 * m).into_owned();
        let t = b.rows(2 * m, 2 * h).into_owned();
        let lhs = FundamentalSymmetry::new(m).form(&s, &s);
        let rhs = FundamentalSymmetry::new(h).form(&t, &t);
        max_abs(&(lhs - rhs))
    }

    pub fn is_isometric(&self, tol: f64) -> bool {
        self.green_residual() <= tol
    }

    /// `Gamma^{-1} = Gamma^{[*]}`, compared as subspaces.
    pub fn is_unitary(&self) -> bool {
        let adj = krein_adjoint(
            &self.graph,
            FundamentalSymmetry::new(self.state_dim),
            FundamentalSymmetry::new(self.boundary_dim),
        )
        .expect("graph dimensions are consistent");
        self.inverse_graph().approx_eq(&adj)
    }

    /// Graph of `Gamma^{-1}` in `C^{2h} (+) C^{2m}`.
    pub fn inverse_graph(&self) -> Subspace {
        let [f, fp, g0, g1] = self.blocks();
        Subspace::span(&vstack(&[&g0, &g1, &f, &fp]))
    }

    /// Defect coefficients: graph-basis combinations with `f' = lambda f`.
    fn defect_coefficients(&self, lambda: Complex64) -> ComplexMatrix {
        let [f, fp, _, _] = self.blocks();
        null_space_with(&(fp - f * lambda), 1.0)
    }

    pub fn weyl(&self, lambda: Complex64) -> WeylValue {
        let [_, _, g0, g1] = self.blocks();
        let n = self.defect_coefficients(lambda);
        let relation = Subspace::span(&vstack(&[&(&g0 * &n), &(&g1 * &n)]));
        let single_valued = relation.mul_part().dim() == 0;
        let operator = if single_valued { relation.operator_part() } else { None };
        WeylValue { lambda, relation, operator, single_valued }
    }

    /// `gamma(lambda)`: maps `Gamma_0 f^` to `f` on the defect space.
    pub fn gamma_field(&self, lambda: Complex64) -> Result<ComplexMatrix> {
        let [f, _, g0, _] = self.blocks();
        let n = self.defect_coefficients(lambda);
        let xf = f * &n;
        let xh = g0 * &n;
        let k = null_space_with(&xh, 1.0);
        if k.ncols() > 0 && operator_norm(&(&xf * &k)) > 1e-9 * operator_norm(&xf).max(1.0) {
            return Err(Error::MultivaluedBoundary);
        }
        Ok(xf * pseudo_inverse(&xh))
    }

    /// `A_Theta = {f^ : Gamma f^ in Theta}` for a relation `Theta` in `C^h`.
    pub fn extension(&self, theta: &Subspace) -> Result<Subspace> {
        let h = self.boundary_dim;
        if theta.ambient_dim() != 2 * h {
            return Err(Error::DimensionMismatch { expected: 2 * h, found: theta.ambient_dim() });
        }
        let [f, fp, g0, g1] = self.blocks();
        let c = theta.annihilator();
        let cons = &c * vstack(&[&g0, &g1]);
        let n = null_space_with(&cons, 1.0);
        Ok(Subspace::span(&vstack(&[&(f * &n), &(fp * &n)])))
    }

    /// `A_0 = ker Gamma_0`.
    pub fn a0(&self) -> Subspace {
        let h = self.boundary_dim;
        let theta = Subspace::span(&vstack(&[&zeros(h, h), &identity(h)]));
        self.extension(&theta).expect("dimensions match")
    }

    /// Transposed triple `{Gamma_1, -Gamma_0}`.
    pub fn transposed(&self) -> Self {
        let [f, fp, g0, g1] = self.blocks();
        Self::new(self.state_dim, self.boundary_dim, Subspace::span(&vstack(&[&f, &fp, &g1, &(-g0)])))
            .expect("dimensions preserved")
    }

    /// `Gamma~_0 = G^{-1} Gamma_0`, `Gamma~_1 = E G^{-1} Gamma_0 + G* Gamma_1`.
    pub fn triangular_transform(&self, g: &ComplexMatrix, e: &ComplexMatrix) -> Result<Self> {
        let h = self.boundary_dim;
        for x in [g, e] {
            if x.shape() != (h, h) {
                return Err(Error::DimensionMismatch { expected: h, found: x.nrows() });
            }
        }
        let sigma_min = smallest_singular_value(g);
        if sigma_min <= RANK_CUTOFF * operator_norm(g).max(1.0) {
            return Err(Error::SingularG { sigma_min });
        }
        let residual = max_abs(&(e - e.adjoint()));
        if residual > 1e-12 * operator_norm(e).max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        let gi = inverse(g)?;
        let [f, fp, g0, g1] = self.blocks();
        let n0 = &gi * &g0;
        let n1 = e * &n0 + g.adjoint() * g1;
        Self::new(self.state_dim, h, Subspace::span(&vstack(&[&f, &fp, &n0, &n1])))
    }

    /// Resolvent of `A_Theta` at `lambda` via the Krein formula
    /// `(A_0 - lambda)^{-1} + gamma(lambda) (Theta - M(lambda))^{-1} gamma(conj lambda)*`.
    pub fn krein_resolvent(&self, theta: &Subspace, lambda: Complex64) -> Result<ComplexMatrix> {
        let h = self.boundary_dim;
        let r0 = self.a0().resolvent(lambda)?;
        let m = self.weyl(lambda).matrix()?.clone();
        let gl = self.gamma_field(lambda)?;
        let glc = self.gamma_field(lambda.conj())?;
        let c = theta.annihilator();
        let (c0, c1) = (c.columns(0, h).into_owned(), c.columns(h, h).into_owned());
        let core = crate::numerics::solve(&(&c0 + &c1 * &m), &c1).map_err(|_| Error::EigenvalueHit { lambda })?;
        Ok(r0 - gl * core * glc.adjoint())
    }
}

/// `(lambda - mu*)^{-1} [(M u, v) - (u, M v)]`, defined off the real axis.
pub fn weyl_form(m: &ComplexMatrix, lambda: Complex64, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Complex64> {
    if lambda.im == 0.0 {
        return Err(Error::DomainViolation);
    }
    let a = (v.adjoint() * m * u)[(0, 0)];
    let b = ((m * v).adjoint() * u)[(0, 0)];
    Ok((a - b) / (lambda - lambda.conj()))
}

pub fn cayley_point(lambda: Complex64) -> Complex64 {
    (lambda - I) / (lambda + I)
}

/// `theta = (M - iI)(M + iI)^{-1}`.
pub fn cayley_to_contraction(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = crate::numerics::check_square(m)?;
    let id = identity(n);
    Ok((m - &id * I) * inverse(&(m + &id * I))?)
}

/// `M = i (I + theta)(I - theta)^{-1}`.
pub fn contraction_to_weyl(theta: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = crate::numerics::check_square(theta)?;
    let id = identity(n);
    Ok((&id + theta) * inverse(&(&id - theta))? * I)
}

/// `{((f, h), (f', -h')) : ((f, f'), (h, h')) in Gamma}` as a relation in `C^{m+h}`.
pub fn main_transform(t: &FiniteTriple) -> Subspace {
    let [f, fp, g0, g1] = t.blocks();
    Subspace::span(&vstack(&[&f, &g0, &fp, &(-g1)]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealPointCertificate {
    pub x: f64,
    /// `||M(x) - M(x)*||`
    pub hermitian_residual: f64,
    /// Smallest singular value of `M(x) + x I`.
    pub min_singular_value: f64,
    pub certified: bool,
}

/// Certifies `x` in the resolvent set of the main transform through
/// `M(x) = M(x)*` and `0 in rho(M(x) + x I)`.
pub fn real_point_certificate(t: &FiniteTriple, x: f64, tol: Tolerance) -> RealPointCertificate {
    let w = t.weyl(Complex64::new(x, 0.0));
    match w.operator {
        Some(m) => {
            let scale = operator_norm(&m);
            let hermitian_residual = operator_norm(&(&m - m.adjoint()));
            let shifted = &m + identity(m.nrows()) * Complex64::new(x, 0.0);
            let min_singular_value = smallest_singular_value(&shifted);
            let thr = tol.threshold(scale);
            RealPointCertificate {
                x,
                hermitian_residual,
                min_singular_value,
                certified: hermitian_residual <= thr && min_singular_value > thr,
            }
        }
        None => {
            RealPointCertificate { x, hermitian_residual: f64::INFINITY, min_singular_value: 0.0, certified: false }
        }
    }
}

/// `exp(K)` with `K = i J H`, `H` a random Hermitian matrix: satisfies
/// `J exp(K)* J = exp(K)^{-1}`, so it is the `Gamma` of a unitary triple.
pub fn random_krein_unitary<R: Rng>(half: usize, scale: f64, rng: &mut R) -> ComplexMatrix {
    let n = 2 * half;
    let mut h = zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                Complex64::new(rng.gen_range(-1.0..1.0), 0.0)
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            h[(i, j)] = v * scale;
            h[(j, i)] = v.conj() * scale;
        }
    }
    let k = FundamentalSymmetry::new(half).matrix() * h * I;
    k.exp()
}

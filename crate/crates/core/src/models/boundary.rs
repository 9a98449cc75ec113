use super::ModelKind;
use crate::numerics::{c, real_matrix, vstack, zeros, Complex64, ComplexMatrix, I};

/// Boundary maps of one interval as matrices acting on the trace vector
/// `(state(x_{n-1}+), state(x_n-))`, where the state is `f` (momentum),
/// `(f, f')` (Schroedinger) or `(f_1, f_2)` (Dirac).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMaps {
    pub gamma0: ComplexMatrix,
    pub gamma1: ComplexMatrix,
}

impl BoundaryMaps {
    /// New maps `(Gamma~_0; Gamma~_1) = V (Gamma_0; Gamma_1)`.
    pub fn transformed(&self, v: &ComplexMatrix) -> Self {
        let h = self.gamma0.nrows();
        let both = v * vstack(&[&self.gamma0, &self.gamma1]);
        Self { gamma0: both.rows(0, h).into_owned(), gamma1: both.rows(h, h).into_owned() }
    }

    pub fn apply(&self, trace: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
        (&self.gamma0 * trace, &self.gamma1 * trace)
    }

    /// `[Gamma_0; Gamma_1]` as one `2h x 2s` matrix.
    pub fn stacked(&self) -> ComplexMatrix {
        vstack(&[&self.gamma0, &self.gamma1])
    }
}

/// Boundary maps of the base triple of one interval.
pub fn boundary_maps(model: ModelKind) -> BoundaryMaps {
    match model {
        ModelKind::Momentum => {
            let s = 1.0 / 2f64.sqrt();
            BoundaryMaps {
                gamma0: crate::numerics::from_rows(&[&[-I * s, I * s]]),
                gamma1: crate::numerics::from_rows(&[&[c(s, 0.0), c(s, 0.0)]]),
            }
        }
        ModelKind::Schroedinger => BoundaryMaps {
            gamma0: real_matrix(2, 4, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
            gamma1: real_matrix(2, 4, &[-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]),
        },
        ModelKind::Dirac { c: cc } => {
            let ic: Complex64 = I * cc;
            let mut g0 = zeros(2, 4);
            g0[(0, 0)] = c(1.0, 0.0);
            g0[(1, 3)] = ic;
            let mut g1 = zeros(2, 4);
            g1[(0, 1)] = ic;
            g1[(1, 2)] = c(1.0, 0.0);
            BoundaryMaps { gamma0: g0, gamma1: g1 }
        }
    }
}

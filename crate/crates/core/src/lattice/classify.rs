use super::{BlockFamily, BlockTransform, Ends, LatticeSpec};
use crate::error::{Error, Result};
use crate::models::ModelKind;
use crate::numerics::{imaginary_part, operator_norm, smallest_singular_value, Complex64, I};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Ordinary,
    BGeneralized,
    SGeneralized,
    ESGeneralizedOnly,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Ordinary => "ordinary",
            Verdict::BGeneralized => "B-generalized (not ordinary)",
            Verdict::SGeneralized => "S-generalized (not B)",
            Verdict::ESGeneralizedOnly => "ES-generalized (not S)",
        }
    }

    /// Decision from boundedness of `sup ||M(i)||`, `sup ||(Im M(i))^{-1}||`, `sup ||Im M(i)||`.
    pub fn from_point_i(c1: bool, c2: bool, cim: bool) -> Self {
        if c1 && c2 {
            Verdict::Ordinary
        } else if c1 {
            Verdict::BGeneralized
        } else if cim {
            Verdict::SGeneralized
        } else {
            Verdict::ESGeneralizedOnly
        }
    }

    /// Decision from boundedness of `sup ||M(a)||`, `sup ||M'(a)||`, `sup ||M'(a)^{-1}||`.
    pub fn from_gap_point(c3: bool, c4: bool, c5: bool) -> Self {
        if c3 && c4 && c5 {
            Verdict::Ordinary
        } else if c3 && c4 {
            Verdict::BGeneralized
        } else if c4 {
            Verdict::SGeneralized
        } else {
            Verdict::ESGeneralizedOnly
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Bounded,
    Divergent,
}

/// How the boundedness flags behind the verdict were obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum VerdictBasis {
    /// Closed-form limits of the block constants at the ends the rule approaches.
    Asymptotic { ends: Ends },
    /// Growth of the running sups between `N/2` and `N`.
    AtTruncation { n: usize },
}

/// Per-block constants, indexed by block `n - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockConstants {
    pub norm_m_i: Vec<f64>,
    pub norm_inv_im_m_i: Vec<f64>,
    pub norm_im_m_i: Vec<f64>,
    pub norm_m_a: Option<Vec<f64>>,
    pub norm_dm_a: Option<Vec<f64>>,
    pub norm_inv_dm_a: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantSummary {
    pub name: &'static str,
    /// Running sup over the whole truncation.
    pub sup: f64,
    /// Running sup over the first half.
    pub sup_half: f64,
    /// `sup > 1.1 sup_half`.
    pub growing: bool,
    /// Limit behaviour from the closed-form asymptotics, when known.
    pub asymptotic: Option<Bound>,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub family: String,
    pub n: usize,
    pub gap_point: Option<f64>,
    pub curves: BlockConstants,
    /// `C1, C2, C_Im` and, with a gap point, `C3, C4, C5`.
    pub constants: Vec<ConstantSummary>,
    pub verdict: Verdict,
    pub verdict_label: &'static str,
    /// Verdict implied by the gap-point constants alone.
    pub gap_verdict: Option<Verdict>,
    pub basis: VerdictBasis,
}

impl ClassificationReport {
    pub fn constant(&self, name: &str) -> Option<&ConstantSummary> {
        self.constants.iter().find(|c| c.name == name)
    }

    /// Nondecreasing sequence `N -> sup_{n <= N}` of a curve.
    pub fn running_sup(curve: &[f64]) -> Vec<f64> {
        curve
            .iter()
            .scan(f64::NEG_INFINITY, |acc, &x| {
                *acc = acc.max(x);
                Some(*acc)
            })
            .collect()
    }
}

const NAMES: [&str; 6] = ["C1", "C2", "C_Im", "C3", "C4", "C5"];

/// Behaviour of `C1, C2, C_Im, C3, C4, C5` as `d -> 0`; every constant stays
/// bounded as `d -> infinity`. Momentum has no gap constants.
fn small_d_profile(model: ModelKind, chain: &[BlockTransform]) -> Option<[Option<Bound>; 6]> {
    use BlockTransform::*;
    let code = match (model, chain) {
        (ModelKind::Momentum, []) => "DBD",
        (ModelKind::Momentum, [Transpose]) => "BDB",
        (ModelKind::Momentum, [DiagSqrt]) | (ModelKind::Momentum, [DiagSqrt, Transpose]) => "BBB",
        (ModelKind::Schroedinger, []) => "DDDDDD",
        (ModelKind::Schroedinger, [Transpose]) => "DDBDBD",
        (ModelKind::Schroedinger, [DiagSqrt]) => "BDBBBD",
        (ModelKind::Schroedinger, [DiagSqrt, Transpose]) => "DBBDBB",
        (ModelKind::Schroedinger, [SchrodingerRegularized])
        | (ModelKind::Schroedinger, [SchrodingerRegularized, Transpose]) => "BBBBBB",
        (ModelKind::Dirac { .. }, []) | (ModelKind::Dirac { .. }, [Transpose]) => "BDBBBD",
        (ModelKind::Dirac { .. }, [DiracTilde]) => "DBDDDB",
        (ModelKind::Dirac { .. }, [DiracTilde, Transpose]) => "BDBBBD",
        _ => return None,
    };
    let mut out = [None; 6];
    for (slot, ch) in out.iter_mut().zip(code.chars()) {
        *slot = Some(if ch == 'B' { Bound::Bounded } else { Bound::Divergent });
    }
    Some(out)
}

fn block_constants(family: &BlockFamily, d: f64, gap: Option<f64>) -> Result<[f64; 6]> {
    let mi = family.weyl(d, I)?;
    let im = imaginary_part(&mi)?;
    let sigma = smallest_singular_value(&im);
    let mut out = [operator_norm(&mi), 1.0 / sigma, operator_norm(&im), f64::NAN, f64::NAN, f64::NAN];
    if let Some(a) = gap {
        let (ma, dma) = family.weyl_with_derivative(d, Complex64::from(a))?;
        out[3] = operator_norm(&ma);
        out[4] = operator_norm(&dma);
        out[5] = 1.0 / smallest_singular_value(&dma);
    }
    Ok(out)
}

fn sup(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Evaluates the classification constants blockwise and decides the kind of
/// the direct-sum triple.
///
/// Rule lattices take boundedness from the closed-form behaviour of the block
/// constants at the ends the rule approaches. Explicit lattices, and chains
/// without a known limit profile, use the growth of the running sups between
/// `N/2` and `N`.
pub fn classify(family: &BlockFamily, lattice: &LatticeSpec, gap_point: Option<f64>) -> Result<ClassificationReport> {
    family.validate()?;
    if let Some(a) = gap_point {
        family.model.check_gap(a)?;
    }
    let n = lattice.len();
    let rows = (1..=n)
        .into_par_iter()
        .map(|k| {
            block_constants(family, lattice.spacing(k), gap_point).map_err(|e| match e {
                Error::PoleProximity { z, distance, .. } => Error::PoleProximity { z, distance, block: Some(k) },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let column = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
    let count = if gap_point.is_some() { 6 } else { 3 };

    let chain = family.normalized_chain();
    let profile = small_d_profile(family.model, &chain);
    let ends = lattice.approached_ends();
    let basis = match (ends, profile) {
        (Some(ends), Some(_)) => VerdictBasis::Asymptotic { ends },
        _ => VerdictBasis::AtTruncation { n },
    };

    let half = (n / 2).max(1);
    let mut constants = Vec::with_capacity(count);
    for j in 0..count {
        let col = column(j);
        let (s, sh) = (sup(&col), sup(&col[..half]));
        let growing = !(s <= 1.1 * sh);
        let asymptotic = match (&basis, profile) {
            (VerdictBasis::Asymptotic { ends }, Some(p)) => {
                Some(if ends.zero { p[j].unwrap_or(Bound::Bounded) } else { Bound::Bounded })
            }
            _ => None,
        };
        let bounded = match asymptotic {
            Some(b) => b == Bound::Bounded,
            None => !growing,
        };
        constants.push(ConstantSummary { name: NAMES[j], sup: s, sup_half: sh, growing, asymptotic, bounded });
    }

    let verdict = Verdict::from_point_i(constants[0].bounded, constants[1].bounded, constants[2].bounded);
    let gap_verdict =
        gap_point.map(|_| Verdict::from_gap_point(constants[3].bounded, constants[4].bounded, constants[5].bounded));
    let curves = BlockConstants {
        norm_m_i: column(0),
        norm_inv_im_m_i: column(1),
        norm_im_m_i: column(2),
        norm_m_a: gap_point.map(|_| column(3)),
        norm_dm_a: gap_point.map(|_| column(4)),
        norm_inv_dm_a: gap_point.map(|_| column(5)),
    };
    Ok(ClassificationReport {
        family: family.label(),
        n,
        gap_point,
        curves,
        constants,
        verdict,
        verdict_label: verdict.label(),
        gap_verdict,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Rule;

    fn fam(model: ModelKind, chain: &[BlockTransform]) -> BlockFamily {
        BlockFamily::new(model, chain.to_vec()).unwrap()
    }

    // The limit table is checked against direct evaluation: a constant counts
    // as divergent when it grows by more than 10x between d = 1e-3 and d = 1e-5.
    #[test]
    fn small_d_profile_matches_evaluation() {
        use BlockTransform::*;
        let cases: Vec<(ModelKind, Vec<BlockTransform>, Option<f64>)> = vec![
            (ModelKind::Momentum, vec![], None),
            (ModelKind::Momentum, vec![Transpose], None),
            (ModelKind::Momentum, vec![DiagSqrt], None),
            (ModelKind::Momentum, vec![DiagSqrt, Transpose], None),
            (ModelKind::Schroedinger, vec![], Some(-1.0)),
            (ModelKind::Schroedinger, vec![Transpose], Some(-1.0)),
            (ModelKind::Schroedinger, vec![DiagSqrt], Some(-1.0)),
            (ModelKind::Schroedinger, vec![DiagSqrt, Transpose], Some(-1.0)),
            (ModelKind::Schroedinger, vec![SchrodingerRegularized], Some(-1.0)),
            (ModelKind::Schroedinger, vec![SchrodingerRegularized, Transpose], Some(-1.0)),
            (ModelKind::Dirac { c: 1.0 }, vec![], Some(0.1)),
            (ModelKind::Dirac { c: 1.0 }, vec![Transpose], Some(0.1)),
            (ModelKind::Dirac { c: 1.0 }, vec![DiracTilde], Some(0.1)),
            (ModelKind::Dirac { c: 1.0 }, vec![DiracTilde, Transpose], Some(0.1)),
        ];
        for (model, chain, gap) in cases {
            let f = fam(model, &chain);
            let p = small_d_profile(model, &chain).unwrap();
            let big = block_constants(&f, 1e-3, gap).unwrap();
            let small = block_constants(&f, 1e-5, gap).unwrap();
            let count = if gap.is_some() { 6 } else { 3 };
            for j in 0..count {
                let observed = if small[j] > 10.0 * big[j] { Bound::Divergent } else { Bound::Bounded };
                assert_eq!(Some(observed), p[j], "{} constant {}", f.label(), NAMES[j]);
            }
        }
    }

    #[test]
    fn far_end_is_bounded() {
        for (model, gap) in [(ModelKind::Schroedinger, Some(-1.0)), (ModelKind::Dirac { c: 1.0 }, Some(0.2))] {
            for chain in [vec![], vec![BlockTransform::Transpose]] {
                let f = fam(model, &chain);
                let a = block_constants(&f, 1e2, gap).unwrap();
                let b = block_constants(&f, 1e4, gap).unwrap();
                for j in 0..6 {
                    assert!(b[j] < 2.0 * a[j] + 1.0, "{} {}", f.label(), NAMES[j]);
                }
            }
        }
    }

    #[test]
    fn verdicts_for_reference_lattices() {
        let l = LatticeSpec::one_over_n(200);
        let schr = fam(ModelKind::Schroedinger, &[]);
        assert_eq!(classify(&schr, &l, None).unwrap().verdict, Verdict::ESGeneralizedOnly);
        let r = classify(&schr.transposed(), &l, Some(-1.0)).unwrap();
        assert_eq!(r.verdict, Verdict::SGeneralized);
        assert_eq!(r.gap_verdict, Some(Verdict::SGeneralized));
        let dirac = fam(ModelKind::Dirac { c: 1.0 }, &[]);
        assert_eq!(classify(&dirac, &l, None).unwrap().verdict, Verdict::BGeneralized);
        let ones = LatticeSpec::constant(1.0, 50).unwrap();
        assert_eq!(classify(&dirac, &ones, Some(0.0)).unwrap().verdict, Verdict::Ordinary);
        assert_eq!(classify(&schr, &ones, None).unwrap().verdict, Verdict::Ordinary);
    }

    #[test]
    fn explicit_lattice_uses_trend() {
        let d: Vec<f64> = (1..=400).map(|k| 1.0 / k as f64).collect();
        let l = LatticeSpec::explicit(d).unwrap();
        let r = classify(&fam(ModelKind::Momentum, &[]), &l, None).unwrap();
        assert_eq!(r.basis, VerdictBasis::AtTruncation { n: 400 });
        assert!(r.constant("C1").unwrap().growing);
        assert_eq!(r.verdict, Verdict::ESGeneralizedOnly);
    }

    #[test]
    fn gap_point_validation() {
        let l = LatticeSpec::one_over_n(3);
        assert!(matches!(classify(&fam(ModelKind::Momentum, &[]), &l, Some(0.0)), Err(Error::NoCommonGap)));
        assert!(matches!(classify(&fam(ModelKind::Schroedinger, &[]), &l, Some(1.0)), Err(Error::GapViolation { .. })));
        let g = LatticeSpec::rule(Rule::Geometric { r: 2.0 }, 10).unwrap();
        let r = classify(&fam(ModelKind::Schroedinger, &[]), &g, None).unwrap();
        assert_eq!(r.verdict, Verdict::Ordinary);
    }

    #[test]
    fn running_sup_is_monotone() {
        let r = classify(&fam(ModelKind::Schroedinger, &[]), &LatticeSpec::one_over_n(100), None).unwrap();
        let s = ClassificationReport::running_sup(&r.curves.norm_im_m_i);
        assert!(s.windows(2).all(|w| w[1] >= w[0]));
    }
}

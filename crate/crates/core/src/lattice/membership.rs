use super::{BlockFamily, BlockTransform, LatticeSpec, Rule};
use crate::error::{Error, Result};
use crate::models::ModelKind;
use crate::numerics::Complex64;
use serde::{Deserialize, Serialize};

/// `coeff * n^{-exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerLaw {
    pub const ZERO: PowerLaw = PowerLaw { coeff: 0.0, exponent: 0.0 };

    pub fn new(coeff: f64, exponent: f64) -> Self {
        Self { coeff, exponent }
    }

    pub fn at(&self, n: usize) -> f64 {
        self.coeff * (n as f64).powf(-self.exponent)
    }

    fn in_l2(&self) -> bool {
        self.coeff == 0.0 || 2.0 * self.exponent > 1.0
    }

    /// Leading term of `self + sign * other`, `None` when it vanishes identically.
    fn combine(&self, other: &PowerLaw, sign: f64) -> Option<PowerLaw> {
        let b = PowerLaw { coeff: sign * other.coeff, exponent: other.exponent };
        match (self.coeff == 0.0, b.coeff == 0.0) {
            (true, true) => None,
            (false, true) => Some(*self),
            (true, false) => Some(b),
            _ if self.exponent == b.exponent => {
                let c = self.coeff + b.coeff;
                (c != 0.0).then_some(PowerLaw { coeff: c, exponent: self.exponent })
            }
            _ => Some(if self.exponent < b.exponent { *self } else { b }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceData {
    /// Pairs `(a_n, b_n)` as `[[re, im], [re, im]]`.
    Pairs { entries: Vec<[[f64; 2]; 2]> },
    /// Scalars `a_n` as `[re, im]`.
    Scalars { entries: Vec<[f64; 2]> },
    /// `a_n`, and `b_n` for two-dimensional blocks, given analytically.
    PowerLaws { a: PowerLaw, b: Option<PowerLaw> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightedSequence {
    pub data: SequenceData,
}

impl WeightedSequence {
    pub fn pairs(entries: &[(Complex64, Complex64)]) -> Self {
        let entries = entries.iter().map(|(a, b)| [[a.re, a.im], [b.re, b.im]]).collect();
        Self { data: SequenceData::Pairs { entries } }
    }

    pub fn scalars(entries: &[Complex64]) -> Self {
        Self { data: SequenceData::Scalars { entries: entries.iter().map(|a| [a.re, a.im]).collect() } }
    }

    pub fn power_law_pair(a: PowerLaw, b: PowerLaw) -> Self {
        Self { data: SequenceData::PowerLaws { a, b: Some(b) } }
    }

    pub fn power_law(a: PowerLaw) -> Self {
        Self { data: SequenceData::PowerLaws { a, b: None } }
    }

    fn is_pair(&self) -> bool {
        match &self.data {
            SequenceData::Pairs { .. } => true,
            SequenceData::Scalars { .. } => false,
            SequenceData::PowerLaws { b, .. } => b.is_some(),
        }
    }

    fn explicit_len(&self) -> Option<usize> {
        match &self.data {
            SequenceData::Pairs { entries } => Some(entries.len()),
            SequenceData::Scalars { entries } => Some(entries.len()),
            SequenceData::PowerLaws { .. } => None,
        }
    }

    /// `(a_n, b_n)` for the 1-based index `n`; `b_n = 0` for scalar data.
    fn entry(&self, n: usize) -> (Complex64, Complex64) {
        let z = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        match &self.data {
            SequenceData::Pairs { entries } => (z(entries[n - 1][0]), z(entries[n - 1][1])),
            SequenceData::Scalars { entries } => (z(entries[n - 1]), Complex64::from(0.0)),
            SequenceData::PowerLaws { a, b } => (Complex64::from(a.at(n)), Complex64::from(b.map_or(0.0, |b| b.at(n)))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipTarget {
    DomM,
    RanGamma0,
    FormDomain,
    DomMTransposed,
    FormDomainTransposed,
}

/// Which quantity built from `(a_n, b_n)` carries the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Combination {
    Difference,
    Sum,
    Scalar,
    Components,
}

impl Combination {
    fn magnitude(&self, a: Complex64, b: Complex64) -> f64 {
        match self {
            Combination::Difference => (a - b).norm_sqr(),
            Combination::Sum => (a + b).norm_sqr(),
            Combination::Scalar => a.norm_sqr(),
            Combination::Components => a.norm_sqr() + b.norm_sqr(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipBasis {
    /// Comparison test on analytic data over a rule lattice.
    ClosedForm,
    /// Dyadic partial-sum growth at truncation `N`.
    PartialSum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    pub basis: MembershipBasis,
    pub combination: Combination,
    /// Weights are `d_n^{-q}`.
    pub weight_power: u32,
    /// `sum_{n <= N} d_n^{-q} |x_n|^2`.
    pub weighted_sum: f64,
    /// The same sum over `n <= N/2`.
    pub weighted_sum_half: f64,
    /// Whether the base sequences lie in `l^2`.
    pub base_l2: bool,
}

fn rule_for(family: &BlockFamily, target: MembershipTarget) -> Result<(Combination, u32)> {
    use MembershipTarget::*;
    let chain = family.normalized_chain();
    let unknown =
        || Error::InvalidInput(format!("no membership characterization for {} and {target:?}", family.label()));
    match (family.model, chain.as_slice()) {
        (ModelKind::Schroedinger, []) => Ok(match target {
            DomM => (Combination::Difference, 2),
            RanGamma0 | FormDomain => (Combination::Difference, 1),
            DomMTransposed => (Combination::Sum, 2),
            FormDomainTransposed => (Combination::Sum, 1),
        }),
        (ModelKind::Momentum, []) => Ok(match target {
            DomM => (Combination::Scalar, 2),
            RanGamma0 | FormDomain => (Combination::Scalar, 1),
            DomMTransposed | FormDomainTransposed => (Combination::Scalar, 0),
        }),
        (ModelKind::Dirac { .. }, []) => match target {
            RanGamma0 => Err(unknown()),
            _ => Ok((Combination::Components, 0)),
        },
        (ModelKind::Dirac { .. }, [BlockTransform::DiracTilde]) => Ok(match target {
            DomM => (Combination::Components, 2),
            RanGamma0 | FormDomain => (Combination::Components, 1),
            DomMTransposed | FormDomainTransposed => (Combination::Components, 0),
        }),
        _ => Err(unknown()),
    }
}

/// Convergence of `sum n^{alpha q} |x_n|^2` (or its geometric analogue) for a
/// power-law `x_n`, `None` meaning `x` vanishes identically.
fn closed_form(rule: Rule, q: u32, x: Option<PowerLaw>) -> bool {
    let Some(x) = x else { return true };
    match rule.weight_exponent() {
        Some(alpha) => alpha * q as f64 - 2.0 * x.exponent < -1.0,
        None => {
            if q == 0 {
                2.0 * x.exponent > 1.0
            } else {
                matches!(rule, Rule::Geometric { r } if r > 1.0)
            }
        }
    }
}

/// Decides whether a boundary sequence lies in the weighted space that
/// describes `target` for the given family.
pub fn membership(
    family: &BlockFamily,
    lattice: &LatticeSpec,
    seq: &WeightedSequence,
    target: MembershipTarget,
) -> Result<MembershipReport> {
    family.validate()?;
    let n = lattice.len();
    if let Some(len) = seq.explicit_len() {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, found: len });
        }
    }
    let (combination, q) = rule_for(family, target)?;
    if seq.is_pair() != (family.boundary_dim() == 2) {
        return Err(Error::InvalidInput(format!(
            "{} blocks need {} entries",
            family.label(),
            if family.boundary_dim() == 2 { "pair" } else { "scalar" }
        )));
    }
    if family.model == ModelKind::Schroedinger && target == MembershipTarget::RanGamma0
        && lattice.declared_limits().is_some_and(|(_, hi)| hi.is_infinite()) {
            return Err(Error::InvalidInput("range of Gamma_0 is characterized only for d^* < infinity".into()));
        }

    let terms: Vec<f64> = (1..=n)
        .map(|k| {
            let (a, b) = seq.entry(k);
            lattice.spacing(k).powi(-(q as i32)) * combination.magnitude(a, b)
        })
        .collect();
    let partial = |m: usize| terms[..m].iter().sum::<f64>();
    let (half, quarter) = ((n / 2).max(1), (n / 4).max(1));
    let (s, sh, sq) = (partial(n), partial(half), partial(quarter));

    let analytic = match (&seq.data, lattice.rule_generator()) {
        (SequenceData::PowerLaws { a, b }, Some(rule)) => Some((*a, *b, rule)),
        _ => None,
    };
    let (member, basis, base_l2) = match analytic {
        Some((a, b, rule)) => {
            let b = b.unwrap_or(PowerLaw::ZERO);
            let base = a.in_l2() && b.in_l2();
            let ok = match combination {
                Combination::Difference => closed_form(rule, q, a.combine(&b, -1.0)),
                Combination::Sum => closed_form(rule, q, a.combine(&b, 1.0)),
                Combination::Scalar => closed_form(rule, q, a.combine(&PowerLaw::ZERO, 1.0)),
                Combination::Components => {
                    closed_form(rule, q, a.combine(&PowerLaw::ZERO, 1.0))
                        && closed_form(rule, q, b.combine(&PowerLaw::ZERO, 1.0))
                }
            };
            (base && ok, MembershipBasis::ClosedForm, base)
        }
        None => {
            // Dyadic blocks of a convergent power-type series shrink geometrically.
            let (t1, t2) = (s - sh, sh - sq);
            let member = t1 <= 1e-14 * s.max(f64::MIN_POSITIVE) || t1 <= 0.75 * t2;
            (member, MembershipBasis::PartialSum, true)
        }
    };
    Ok(MembershipReport {
        member,
        basis,
        combination,
        weight_power: q,
        weighted_sum: s,
        weighted_sum_half: sh,
        base_l2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schr() -> BlockFamily {
        BlockFamily::base(ModelKind::Schroedinger)
    }

    #[test]
    fn zero_difference_is_in_domain() {
        let l = LatticeSpec::one_over_n(1000);
        let p = PowerLaw::new(1.0, 1.0);
        let r = membership(&schr(), &l, &WeightedSequence::power_law_pair(p, p), MembershipTarget::DomM).unwrap();
        assert!(r.member);
        assert_eq!(r.weighted_sum, 0.0);
    }

    #[test]
    fn power_law_thresholds() {
        let l = LatticeSpec::one_over_n(1000);
        let check = |s: f64, t: MembershipTarget| {
            let seq = WeightedSequence::power_law_pair(PowerLaw::new(1.0, s), PowerLaw::ZERO);
            membership(&schr(), &l, &seq, t).unwrap().member
        };
        // Weighted series sum n^{q - 2s}.
        assert!(!check(1.0, MembershipTarget::DomM));
        assert!(!check(1.0, MembershipTarget::FormDomain));
        assert!(!check(1.5, MembershipTarget::DomM));
        assert!(check(1.5, MembershipTarget::FormDomain));
        assert!(check(1.5, MembershipTarget::RanGamma0));
        assert!(check(1.6, MembershipTarget::DomM));
    }

    #[test]
    fn transposed_targets_use_sums() {
        let l = LatticeSpec::one_over_n(100);
        let p = PowerLaw::new(1.0, 1.0);
        let m = PowerLaw::new(-1.0, 1.0);
        let seq = WeightedSequence::power_law_pair(p, m);
        assert!(membership(&schr(), &l, &seq, MembershipTarget::DomMTransposed).unwrap().member);
        assert!(!membership(&schr(), &l, &seq, MembershipTarget::DomM).unwrap().member);
    }

    #[test]
    fn geometric_weights() {
        let shrinking = LatticeSpec::rule(Rule::Geometric { r: 0.5 }, 20).unwrap();
        let growing = LatticeSpec::rule(Rule::Geometric { r: 2.0 }, 20).unwrap();
        let seq = WeightedSequence::power_law(PowerLaw::new(1.0, 2.0));
        let mom = BlockFamily::base(ModelKind::Momentum);
        assert!(!membership(&mom, &shrinking, &seq, MembershipTarget::FormDomain).unwrap().member);
        assert!(membership(&mom, &growing, &seq, MembershipTarget::FormDomain).unwrap().member);
        assert!(matches!(
            membership(
                &schr(),
                &growing,
                &WeightedSequence::power_law_pair(PowerLaw::new(1.0, 2.0), PowerLaw::ZERO),
                MembershipTarget::RanGamma0
            ),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn explicit_sequences_use_partial_sums() {
        let l = LatticeSpec::one_over_n(4096);
        let mom = BlockFamily::base(ModelKind::Momentum);
        let fast: Vec<Complex64> = (1..=4096).map(|k| Complex64::from((k as f64).powi(-2))).collect();
        let slow: Vec<Complex64> = (1..=4096).map(|k| Complex64::from(1.0 / k as f64)).collect();
        let r = membership(&mom, &l, &WeightedSequence::scalars(&fast), MembershipTarget::FormDomain).unwrap();
        assert!(r.member && r.basis == MembershipBasis::PartialSum);
        assert!(!membership(&mom, &l, &WeightedSequence::scalars(&slow), MembershipTarget::FormDomain).unwrap().member);
    }

    #[test]
    fn length_and_shape_errors() {
        let l = LatticeSpec::one_over_n(3);
        let seq = WeightedSequence::scalars(&[Complex64::from(1.0); 2]);
        let mom = BlockFamily::base(ModelKind::Momentum);
        assert_eq!(
            membership(&mom, &l, &seq, MembershipTarget::DomM),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        );
        let seq = WeightedSequence::scalars(&[Complex64::from(1.0); 3]);
        assert!(membership(&schr(), &l, &seq, MembershipTarget::DomM).is_err());
    }
}

//! Truncated direct sums of interval triples over a lattice `0 = x_0 < x_1 < ...`
//! with spacings `d_n = x_n - x_{n-1}`.

mod classify;
mod family;
mod membership;

pub use classify::{classify, BlockConstants, Bound, ClassificationReport, ConstantSummary, Verdict, VerdictBasis};
pub use family::{direct_sum_weyl, renormalize, BlockDiagonal, BlockFamily, BlockTransform, RenormalizedLattice};
pub use membership::{
    membership, Combination, MembershipBasis, MembershipReport, MembershipTarget, PowerLaw, SequenceData,
    WeightedSequence,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Analytic generator of the spacings, indexed by `n = 1, 2, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `d_n = 1/n`.
    OneOverN,
    /// `d_n = h`.
    Constant { h: f64 },
    /// `d_n = r^{n-1}`.
    Geometric { r: f64 },
    /// `d_n = n^{-p}`.
    Power { p: f64 },
}

impl Rule {
    pub fn spacing(&self, n: usize) -> f64 {
        let x = n as f64;
        match *self {
            Rule::OneOverN => 1.0 / x,
            Rule::Constant { h } => h,
            Rule::Geometric { r } => r.powi(n as i32 - 1),
            Rule::Power { p } => x.powf(-p),
        }
    }

    /// `(inf d_n, sup d_n)` over the infinite family.
    pub fn limits(&self) -> (f64, f64) {
        match *self {
            Rule::OneOverN => (0.0, 1.0),
            Rule::Constant { h } => (h, h),
            Rule::Geometric { r } if r < 1.0 => (0.0, 1.0),
            Rule::Geometric { r } if r > 1.0 => (1.0, f64::INFINITY),
            Rule::Geometric { .. } => (1.0, 1.0),
            Rule::Power { p } if p > 0.0 => (0.0, 1.0),
            Rule::Power { p } if p < 0.0 => (1.0, f64::INFINITY),
            Rule::Power { .. } => (1.0, 1.0),
        }
    }

    /// Growth of the weight `d_n^{-q}` as a power `n^{alpha q}`: returns `alpha`,
    /// or `None` when the weights are exponential in `n`.
    pub(crate) fn weight_exponent(&self) -> Option<f64> {
        match *self {
            Rule::OneOverN => Some(1.0),
            Rule::Constant { .. } => Some(0.0),
            Rule::Geometric { r: 1.0 } => Some(0.0),
            Rule::Geometric { .. } => None,
            Rule::Power { p } => Some(p),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Rule::OneOverN => true,
            Rule::Constant { h } => h > 0.0 && h.is_finite(),
            Rule::Geometric { r } => r > 0.0 && r.is_finite(),
            Rule::Power { p } => p.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid lattice rule {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Explicit(Vec<f64>),
    Rule(Rule),
}

/// Which ends of `(0, infinity)` the spacings approach along the infinite family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ends {
    pub zero: bool,
    pub infinity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice", into = "RawLattice")]
pub struct LatticeSpec {
    generator: Generator,
    n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawLattice {
    Rule {
        #[serde(flatten)]
        rule: Rule,
        #[serde(rename = "N")]
        n: usize,
    },
    Explicit {
        d: Vec<f64>,
    },
}

impl TryFrom<RawLattice> for LatticeSpec {
    type Error = Error;

    fn try_from(raw: RawLattice) -> Result<Self> {
        match raw {
            RawLattice::Rule { rule, n } => LatticeSpec::rule(rule, n),
            RawLattice::Explicit { d } => LatticeSpec::explicit(d),
        }
    }
}

impl From<LatticeSpec> for RawLattice {
    fn from(l: LatticeSpec) -> Self {
        match l.generator {
            Generator::Rule(rule) => RawLattice::Rule { rule, n: l.n },
            Generator::Explicit(d) => RawLattice::Explicit { d },
        }
    }
}

impl LatticeSpec {
    pub fn rule(rule: Rule, n: usize) -> Result<Self> {
        rule.validate()?;
        if n == 0 {
            return Err(Error::InvalidInput("lattice needs N >= 1".into()));
        }
        Ok(Self { generator: Generator::Rule(rule), n })
    }

    pub fn explicit(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::InvalidInput("lattice needs at least one interval".into()));
        }
        if let Some(bad) = d.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidInput(format!("spacing {bad} is not positive and finite")));
        }
        let n = d.len();
        Ok(Self { generator: Generator::Explicit(d), n })
    }

    pub fn one_over_n(n: usize) -> Self {
        Self { generator: Generator::Rule(Rule::OneOverN), n: n.max(1) }
    }

    pub fn constant(h: f64, n: usize) -> Result<Self> {
        Self::rule(Rule::Constant { h }, n)
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn rule_generator(&self) -> Option<Rule> {
        match &self.generator {
            Generator::Rule(r) => Some(*r),
            Generator::Explicit(_) => None,
        }
    }

    /// Truncation count `N`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Same generator truncated at `n` (explicit lists are cut).
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.clamp(1, self.n);
        match &self.generator {
            Generator::Rule(r) => Self { generator: Generator::Rule(*r), n },
            Generator::Explicit(d) => Self { generator: Generator::Explicit(d[..n].to_vec()), n },
        }
    }

    /// `d_n` for the 1-based index `n`.
    pub fn spacing(&self, n: usize) -> f64 {
        match &self.generator {
            Generator::Rule(r) => r.spacing(n),
            Generator::Explicit(d) => d[n - 1],
        }
    }

    pub fn spacings(&self) -> Vec<f64> {
        (1..=self.n).map(|k| self.spacing(k)).collect()
    }

    /// Lattice points `x_0 = 0, x_1, ..., x_N`.
    pub fn points(&self) -> Vec<f64> {
        let mut x = vec![0.0];
        let mut s = 0.0;
        for d in self.spacings() {
            s += d;
            x.push(s);
        }
        x
    }

    /// `(d_*, d^*)` over the truncation.
    pub fn truncation_bounds(&self) -> (f64, f64) {
        self.spacings().into_iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)))
    }

    /// `(d_*, d^*)` of the infinite family for rule generators.
    pub fn declared_limits(&self) -> Option<(f64, f64)> {
        self.rule_generator().map(|r| r.limits())
    }

    /// Ends approached by the infinite family, `None` for explicit lists.
    pub fn approached_ends(&self) -> Option<Ends> {
        self.rule_generator().map(|r| {
            let (lo, hi) = r.limits();
            Ends { zero: lo == 0.0, infinity: hi.is_infinite() }
        })
    }
}

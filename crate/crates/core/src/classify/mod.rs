//! Predicting the eventual sign of `Δ_{E,ℓ}(n)` as `ℓ → ∞`.
//!
//! The pipeline tries, in order: the table of configurations with known
//! answers, the quotient `Q_E(n) = M(n)²/(M(n−1)M(n+1))`, and, when `Q = 1`,
//! the composition-count ratio `A(n)²/(A(n−1)A(n+1))`, which in one
//! configuration falls through to the `2g(4)` versus `g(2)²` comparison.

mod criteria;
mod delta;
mod table;

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

pub use criteria::{a_ratio, classify_basic, classify_refined, q_value};
pub use delta::{
    classify_delta_branch, convex_branch_bound, delta_configuration, delta_ratio, Branch,
    DeltaBranchReport, ProbePoint, Trend,
};
pub use table::{consecutive_rule_start, theorem_table};

use crate::error::Result;
use crate::exact;
use crate::model::{ExceptionSet, WeightFamily};
use crate::qseries::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    GreaterThanOne,
    EqualOne,
    LessThanOne,
}

/// `Q_E(n)` with its position relative to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QValue {
    pub n: u64,
    #[serde(serialize_with = "exact::ser_rational")]
    pub q: BigRational,
    pub relation: Relation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EventuallyConcave,
    EventuallyConvex,
    Zero,
    Conditional,
    Unknown,
}

impl Verdict {
    /// The sign `Δ` should settle on, for definite verdicts.
    pub fn expected_sign(self) -> Option<Sign> {
        match self {
            Verdict::EventuallyConcave => Some(Sign::Positive),
            Verdict::EventuallyConvex => Some(Sign::Negative),
            Verdict::Zero => Some(Sign::Zero),
            Verdict::Conditional | Verdict::Unknown => None,
        }
    }

    pub fn is_definite(self) -> bool {
        self.expected_sign().is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    QCriterion,
    ACriterion,
    TheoremTable,
    S13Identity,
    DeltaBranch,
    None,
}

/// Which checks the composition-count criterion needed and how they came out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    /// `M(m) > M(m−1)` for every `m` in `growth_window`.
    pub strict_growth: bool,
    pub growth_window: (u64, u64),
    pub unique_prev: bool,
    pub unique_here: bool,
    pub unique_next: bool,
    /// Doubled maximizer at `n` equals the union of the maximizers at `n ± 1`;
    /// `None` unless all three are unique.
    pub balanced: Option<bool>,
}

impl Hypotheses {
    pub fn all_hold(&self) -> bool {
        self.strict_growth
            && self.unique_prev
            && self.unique_here
            && self.unique_next
            && self.balanced == Some(true)
    }
}

/// `A(n)²/(A(n−1)A(n+1))` with the hypotheses it depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ARatio {
    pub n: u64,
    #[serde(serialize_with = "exact::ser_rational")]
    pub ratio: BigRational,
    pub hypotheses: Hypotheses,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Detail {
    Q(QValue),
    A(ARatio),
    Rule {
        rule: &'static str,
        statement: String,
    },
    Delta(DeltaBranchReport),
    Note {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub verdict: Verdict,
    pub mechanism: Mechanism,
    pub detail: Detail,
}

impl Prediction {
    pub(crate) fn unknown(reason: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::Unknown,
            mechanism: Mechanism::None,
            detail: Detail::Note {
                reason: reason.into(),
            },
        }
    }
}

/// Weights and `ℓ` range used to probe the `2g(4)/g(2)²` ratio.
#[derive(Clone, Debug)]
pub struct DeltaProbe {
    pub weights: WeightFamily,
    pub ells: RangeInclusive<u32>,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Extra values below `n − 1` on which strict growth of `M` is checked.
    pub guard: u64,
    pub probe: Option<DeltaProbe>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            guard: 5,
            probe: None,
        }
    }
}

/// The full pipeline: table, then `Q`, then the refined criterion.
pub fn classify(e: &ExceptionSet, n: u64, opts: &ClassifyOptions) -> Result<Prediction> {
    let table = theorem_table(e, n);
    if table.verdict != Verdict::Unknown {
        return Ok(table);
    }
    let basic = classify_basic(e, n);
    if basic.verdict != Verdict::Unknown {
        return Ok(basic);
    }
    match &basic.detail {
        Detail::Q(q) if q.relation == Relation::EqualOne => classify_refined(e, n, opts),
        _ => Ok(basic),
    }
}

pub(crate) fn signum_rational(r: &BigRational) -> Relation {
    let one = BigRational::from_integer(BigInt::from(1));
    match r.cmp(&one) {
        std::cmp::Ordering::Greater => Relation::GreaterThanOne,
        std::cmp::Ordering::Equal => Relation::EqualOne,
        std::cmp::Ordering::Less => Relation::LessThanOne,
    }
}

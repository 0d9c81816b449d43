//! Closed-form maximal products for structured supports `S = {1, a_2, a_3, …}`.
//!
//! Three regimes are covered: a wide gap (`a_2 ≥ 3`, `a_3 ≥ 2a_2`), where only
//! `a_2` and `1` are ever used; `a_2 = 2`, split by `a_3` and the presence of
//! 4 or 5; and consecutive `a_3 = a_2 + 1` above the threshold
//! `a_2(a_2−1)(3a_2−1)/2`, where `n ≡ i (mod a_2)` uses exactly `i` copies of
//! `a_3`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use super::PartitionMultiset;
use crate::error::{Error, Result};
use crate::model::ExceptionSet;

/// The small elements of `S`. When `complete` is false, `elements` is
/// `S ∩ [1, last]` and nothing is known beyond `last`; when true, it is all
/// of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportHead {
    elements: Vec<u64>,
    complete: bool,
}

impl SupportHead {
    pub fn new(elements: Vec<u64>, complete: bool) -> Result<Self> {
        if elements.first() != Some(&1) {
            return Err(Error::InvalidHead("the support must start with 1".into()));
        }
        if !elements.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidHead(format!(
                "{elements:?} is not strictly increasing"
            )));
        }
        Ok(Self { elements, complete })
    }

    /// The head of `S`: the whole support when it is finite, otherwise
    /// `S ∩ [1, horizon]`.
    pub fn from_exceptions(e: &ExceptionSet, horizon: u64) -> Self {
        match e.finite_support() {
            Some(elements) => Self {
                elements,
                complete: true,
            },
            None => Self {
                elements: e.support(horizon).elements,
                complete: false,
            },
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    fn last(&self) -> u64 {
        *self.elements.last().unwrap()
    }

    /// `Some(membership)` when the head decides it.
    fn decides(&self, k: u64) -> Option<bool> {
        if self.complete || k <= self.last() {
            Some(self.elements.contains(&k))
        } else {
            None
        }
    }

    /// The `i`-th element (1-based), `Some(None)` when `S` provably has fewer.
    fn nth(&self, i: usize) -> Option<Option<u64>> {
        match self.elements.get(i - 1) {
            Some(&a) => Some(Some(a)),
            None if self.complete => Some(None),
            None => None,
        }
    }
}

impl fmt::Display for SupportHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.elements.iter().map(u64::to_string).collect();
        f.write_str(&list.join(","))?;
        if !self.complete {
            f.write_str(",...")?;
        }
        Ok(())
    }
}

impl FromStr for SupportHead {
    type Err = Error;

    /// `1,3,4,...` (open) or `1,3` (the complete support).
    fn from_str(input: &str) -> Result<Self> {
        let mut elements = Vec::new();
        let mut complete = true;
        let tokens: Vec<&str> = input.split(',').map(str::trim).collect();
        for (i, token) in tokens.iter().enumerate() {
            if *token == "..." || *token == "…" {
                if i + 1 != tokens.len() {
                    return Err(Error::parse("support head", input, token));
                }
                complete = false;
                continue;
            }
            elements.push(
                token
                    .parse::<u64>()
                    .map_err(|_| Error::parse("support head", input, token))?,
            );
        }
        Self::new(elements, complete)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormCase {
    /// `a_2 ≥ 3`, `a_3 ≥ 2a_2`.
    WideGap,
    /// `a_2 = 2`, `a_3 = 3`, `4 ∉ S`.
    TwoThree,
    /// `a_2 = 2`, `a_3 = 3`, `a_4 = 4`.
    TwoThreeFour,
    /// `a_2 = 2`, `a_3 = 4`, `5 ∉ S`.
    TwoFour,
    /// `a_2 = 2`, `a_3 = 4`, `a_4 = 5`.
    TwoFourFive,
    /// `a_2 = 2`, `a_3 = 5`.
    TwoFive,
    /// `a_2 = 2`, `a_3 ≥ 6`.
    TwoSparse,
    /// `a_2 ≥ 3`, `a_3 = a_2 + 1`, `n` above the threshold.
    Consecutive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormReport {
    pub case: ClosedFormCase,
    pub n: u64,
    #[serde(rename = "M", serialize_with = "crate::exact::ser_biguint")]
    pub max: BigUint,
    /// Sorted like [`super::MaxProdReport::maximizers`].
    pub maximizers: Vec<PartitionMultiset>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Applicable(ClosedFormReport),
    NotApplicable(String),
}

/// `a_2(a_2−1)(3a_2−1)/2`.
pub fn consecutive_threshold(a2: u64) -> u64 {
    a2 * (a2 - 1) * (3 * a2 - 1) / 2
}

pub fn closed_form_max(head: &SupportHead, n: u64) -> Result<ClosedForm> {
    let short = |what: &str| Error::InvalidHead(format!("{head} does not determine {what}"));
    let Some(a2) = head.nth(2).ok_or_else(|| short("a_2"))? else {
        return Ok(ClosedForm::NotApplicable("S = {1}".into()));
    };
    let a3 = head.nth(3).ok_or_else(|| short("a_3"))?;

    let (case, maximizers) = if a2 == 2 {
        // No a_3 at all behaves like a_3 ≥ 6.
        match a3.unwrap_or(u64::MAX) {
            3 => {
                let has4 = head.decides(4).ok_or_else(|| short("whether 4 ∈ S"))?;
                if has4 {
                    (ClosedFormCase::TwoThreeFour, two_three(n, true))
                } else {
                    (ClosedFormCase::TwoThree, two_three(n, false))
                }
            }
            4 => {
                let has5 = head.decides(5).ok_or_else(|| short("whether 5 ∈ S"))?;
                if has5 {
                    (ClosedFormCase::TwoFourFive, two_four(n, true))
                } else {
                    (ClosedFormCase::TwoFour, two_four(n, false))
                }
            }
            5 => (ClosedFormCase::TwoFive, two_five(n)),
            _ => (ClosedFormCase::TwoSparse, vec![floor_power(2, n)]),
        }
    } else {
        match a3 {
            Some(a3) if a3 < 2 * a2 && a3 != a2 + 1 => {
                return Ok(ClosedForm::NotApplicable(format!(
                    "a_2 = {a2}, a_3 = {a3}: neither a wide gap nor consecutive"
                )));
            }
            Some(a3) if a3 == a2 + 1 => {
                let threshold = consecutive_threshold(a2);
                if n < threshold {
                    return Ok(ClosedForm::NotApplicable(format!(
                        "n = {n} is below the threshold {threshold}"
                    )));
                }
                let i = n % a2;
                let rest = (n - i * a3) / a2;
                (
                    ClosedFormCase::Consecutive,
                    vec![PartitionMultiset::from_multiplicities(&[
                        (a3, i as usize),
                        (a2, rest as usize),
                    ])],
                )
            }
            _ => (ClosedFormCase::WideGap, vec![floor_power(a2, n)]),
        }
    };

    let mut maximizers = maximizers;
    maximizers.sort();
    maximizers.dedup();
    let max = maximizers[0].product();
    debug_assert!(maximizers
        .iter()
        .all(|p| p.product() == max && p.sum() == n));
    Ok(ClosedForm::Applicable(ClosedFormReport {
        case,
        n,
        max,
        maximizers,
    }))
}

/// `(a^{⌊n/a⌋}, 1^{n mod a})`.
fn floor_power(a: u64, n: u64) -> PartitionMultiset {
    PartitionMultiset::from_multiplicities(&[(a, (n / a) as usize), (1, (n % a) as usize)])
}

fn two_three(n: u64, has4: bool) -> Vec<PartitionMultiset> {
    let threes = |k: u64| (3, k as usize);
    match (n, n % 3) {
        (0, _) => vec![PartitionMultiset::new(vec![])],
        (1, _) => vec![PartitionMultiset::new(vec![1])],
        (_, 0) => vec![PartitionMultiset::from_multiplicities(&[threes(n / 3)])],
        (_, 1) => {
            let mut out = vec![PartitionMultiset::from_multiplicities(&[
                threes((n - 4) / 3),
                (2, 2),
            ])];
            if has4 {
                out.push(PartitionMultiset::from_multiplicities(&[
                    (4, 1),
                    threes((n - 4) / 3),
                ]));
            }
            out
        }
        _ => vec![PartitionMultiset::from_multiplicities(&[
            threes((n - 2) / 3),
            (2, 1),
        ])],
    }
}

/// Every partition of `even` into 2s and 4s, with `extra` appended.
fn twos_and_fours(even: u64, extra: &[u64]) -> Vec<PartitionMultiset> {
    (0..=even / 4)
        .map(|fours| {
            let mut parts = vec![4; fours as usize];
            parts.extend(std::iter::repeat_n(2, ((even - 4 * fours) / 2) as usize));
            parts.extend_from_slice(extra);
            PartitionMultiset::new(parts)
        })
        .collect()
}

fn two_four(n: u64, has5: bool) -> Vec<PartitionMultiset> {
    if n.is_multiple_of(2) {
        return twos_and_fours(n, &[]);
    }
    if has5 && n >= 5 {
        twos_and_fours(n - 5, &[5])
    } else {
        twos_and_fours(n - 1, &[1])
    }
}

fn two_five(n: u64) -> Vec<PartitionMultiset> {
    let p = match n {
        _ if n.is_multiple_of(2) => {
            PartitionMultiset::from_multiplicities(&[(2, (n / 2) as usize)])
        }
        1 => PartitionMultiset::new(vec![1]),
        3 => PartitionMultiset::new(vec![2, 1]),
        _ => PartitionMultiset::from_multiplicities(&[(5, 1), (2, ((n - 5) / 2) as usize)]),
    };
    vec![p]
}

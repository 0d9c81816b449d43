//! Maximal products of parts over partitions of `n` with parts in `S`.
//!
//! `M_E(n)` is the largest product, `M̃_E(n)` the largest product strictly
//! below it, and `A_E(n)` the composition count of the maximizers divided by
//! `k!`, i.e. `Σ_maximizers 1/∏ mult!`.

mod brute;
mod closed_form;
mod dp;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use brute::{max_product_bruteforce, max_product_bruteforce_bounded, BRUTE_FORCE_BOUND};
pub use closed_form::{
    closed_form_max, consecutive_threshold, ClosedForm, ClosedFormCase, ClosedFormReport,
    SupportHead,
};
pub use dp::{max_product, max_products_upto, second_max};

use crate::exact;

/// A partition stored with non-increasing parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PartitionMultiset {
    parts: Vec<u64>,
}

impl PartitionMultiset {
    pub fn new(mut parts: Vec<u64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn from_multiplicities(spec: &[(u64, usize)]) -> Self {
        Self::new(
            spec.iter()
                .flat_map(|&(part, mult)| std::iter::repeat_n(part, mult))
                .collect(),
        )
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn product(&self) -> BigUint {
        self.parts.iter().map(|&p| BigUint::from(p)).product()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicities(&self) -> BTreeMap<u64, usize> {
        let mut map = BTreeMap::new();
        for &p in &self.parts {
            *map.entry(p).or_insert(0) += 1;
        }
        map
    }

    /// `1/∏ mult!`: the number of distinct orderings divided by `k!`.
    pub fn composition_weight(&self) -> BigRational {
        let denom: BigUint = self
            .multiplicities()
            .values()
            .flat_map(|&m| 1..=m as u64)
            .map(BigUint::from)
            .product();
        BigRational::new(1.into(), denom.into())
    }

    /// Disjoint union of two multisets.
    pub fn union(&self, other: &PartitionMultiset) -> PartitionMultiset {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        PartitionMultiset::new(parts)
    }
}

impl fmt::Display for PartitionMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .multiplicities()
            .iter()
            .rev()
            .map(|(p, m)| {
                if *m == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{m}")
                }
            })
            .collect();
        write!(f, "({})", body.join(","))
    }
}

/// Everything known about the maximal products at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxProdReport {
    pub n: u64,
    #[serde(rename = "M", serialize_with = "exact::ser_biguint")]
    pub max: BigUint,
    /// Sorted, duplicate-free.
    pub maximizers: Vec<PartitionMultiset>,
    pub unique: bool,
    #[serde(rename = "A", serialize_with = "exact::ser_rational")]
    pub a: BigRational,
    #[serde(rename = "M_tilde", serialize_with = "exact::ser_opt_biguint")]
    pub second: Option<BigUint>,
}

impl MaxProdReport {
    pub(crate) fn assemble(
        n: u64,
        max: BigUint,
        mut maximizers: Vec<PartitionMultiset>,
        second: Option<BigUint>,
    ) -> Self {
        maximizers.sort();
        maximizers.dedup();
        let a = maximizers
            .iter()
            .map(PartitionMultiset::composition_weight)
            .fold(BigRational::zero(), |acc, w| acc + w);
        Self {
            n,
            max,
            unique: maximizers.len() == 1,
            maximizers,
            a,
            second,
        }
    }

    /// The sole maximizer, when there is exactly one.
    pub fn unique_maximizer(&self) -> Option<&PartitionMultiset> {
        self.unique.then(|| &self.maximizers[0])
    }

    /// `k!·A_E(n)` for a unique maximizer with `k` parts: the composition count.
    pub fn composition_count(&self) -> BigRational {
        self.maximizers
            .iter()
            .map(|p| {
                let k_fact: BigUint = (1..=p.len() as u64).map(BigUint::from).product();
                p.composition_weight() * BigRational::from_integer(k_fact.into())
            })
            .fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub(crate) fn trivial(n: u64) -> Self {
        let maximizers = if n == 0 {
            vec![PartitionMultiset::new(vec![])]
        } else {
            vec![PartitionMultiset::new(vec![1])]
        };
        Self::assemble(n, BigUint::one(), maximizers, None)
    }
}

/// No maximizer uses an element `≥ 2a_2` (only meaningful for `a_2 ≥ 3`).
pub fn avoids_large_parts(report: &MaxProdReport, a2: u64) -> bool {
    report
        .maximizers
        .iter()
        .all(|p| p.parts().iter().all(|&part| part < 2 * a2))
}

/// No maximizer repeats a part other than `a_2` `a_2` or more times.
pub fn multiplicities_below_a2(report: &MaxProdReport, a2: u64) -> bool {
    report.maximizers.iter().all(|p| {
        p.multiplicities()
            .iter()
            .all(|(&part, &mult)| part == a2 || (mult as u64) < a2)
    })
}

use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use super::{Detail, Mechanism, Prediction, Verdict};
use crate::error::{Error, Result};
use crate::exact::{self, ratio};
use crate::model::{ExceptionSet, WeightFamily};
use crate::qseries::g_table;

/// `1, 2, 3, 4 ∈ S`, `n ≡ 2 (mod 3)` and `n > 3`: the configuration where
/// `n − 1` has the two maximizers `(4, 3^k)` and `(3^k, 2, 2)`.
pub fn delta_configuration(e: &ExceptionSet, n: u64) -> bool {
    n > 3 && n % 3 == 2 && (1..=4).all(|m| e.allows(m))
}

/// Smallest `n` bound for the convex branch: it needs `n > 2(δ+2)/(δ−1)`.
pub fn convex_branch_bound(delta: &BigRational) -> Option<BigRational> {
    let one = BigRational::from_integer(BigInt::from(1));
    if *delta <= one {
        return None;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    Some(&two * (delta + &two) / (delta - &one))
}

/// Which branch a ratio value would trigger at `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Ratio above `(n+4)/(n−2)`: some `δ > 1` with `n > 2(δ+2)/(δ−1)` fits.
    Convex,
    /// Ratio below 1.
    Concave,
    /// Between the two bounds; neither branch applies.
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    /// Successive differences alternate in sign.
    Oscillating,
    Mixed,
    Insufficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbePoint {
    pub ell: u32,
    #[serde(serialize_with = "exact::ser_rational")]
    pub ratio: BigRational,
    pub branch: Branch,
}

/// Exact probes of `2g_ℓ(4)/g_ℓ(2)²` and the branch each would select.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaBranchReport {
    pub n: u64,
    /// `(n+4)/(n−2)`: ratios above it select the convex branch.
    #[serde(serialize_with = "exact::ser_rational")]
    pub critical_delta: BigRational,
    pub convex_branch: String,
    pub concave_branch: String,
    pub probes: Vec<ProbePoint>,
    pub trend: Trend,
    #[serde(serialize_with = "exact::ser_opt_rational")]
    pub last: Option<BigRational>,
    /// Branch of the last probe at even `ℓ`.
    pub even_leaning: Option<Branch>,
    /// Branch of the last probe at odd `ℓ`.
    pub odd_leaning: Option<Branch>,
}

impl DeltaBranchReport {
    pub fn unprobed(n: u64) -> Self {
        Self {
            n,
            critical_delta: critical_delta(n),
            convex_branch: format!(
                "eventually convex if 2g(4) > δ·g(2)² for large ℓ with some δ > {}",
                critical_delta(n)
            ),
            concave_branch: "eventually concave if 2g(4) < δ·g(2)² for large ℓ with some δ < 1"
                .into(),
            probes: Vec::new(),
            trend: Trend::Insufficient,
            last: None,
            even_leaning: None,
            odd_leaning: None,
        }
    }
}

fn critical_delta(n: u64) -> BigRational {
    BigRational::new(BigInt::from(n + 4), BigInt::from(n - 2))
}

fn branch_of(value: &BigRational, critical: &BigRational) -> Branch {
    if value > critical {
        Branch::Convex
    } else if *value < BigRational::from_integer(BigInt::from(1)) {
        Branch::Concave
    } else {
        Branch::Neither
    }
}

fn trend_of(values: &[BigRational]) -> Trend {
    if values.len() < 2 {
        return Trend::Insufficient;
    }
    let steps: Vec<std::cmp::Ordering> = values.windows(2).map(|w| w[1].cmp(&w[0])).collect();
    use std::cmp::Ordering::*;
    if steps.iter().all(|&s| s == Equal) {
        Trend::Constant
    } else if steps.iter().all(|&s| s != Less) {
        Trend::Increasing
    } else if steps.iter().all(|&s| s != Greater) {
        Trend::Decreasing
    } else if steps.len() >= 2
        && steps.iter().all(|&s| s != Equal)
        && steps.windows(2).all(|w| w[0] != w[1])
    {
        Trend::Oscillating
    } else {
        Trend::Mixed
    }
}

/// `2g_ℓ(4)/g_ℓ(2)²` at one `ℓ`.
pub fn delta_ratio(e: &ExceptionSet, w: &WeightFamily, ell: u32) -> BigRational {
    let g = g_table(e, w, ell, 4);
    let g2 = g.get(2);
    let num: BigUint = g.get(4) * 2u32;
    ratio(&num, &(g2 * g2))
}

/// Probes the `2g(4)` versus `g(2)²` comparison. Always `Conditional`: finitely
/// many probes cannot decide the limit.
pub fn classify_delta_branch(
    e: &ExceptionSet,
    n: u64,
    w: &WeightFamily,
    ells: RangeInclusive<u32>,
) -> Result<Prediction> {
    if !delta_configuration(e, n) {
        return Err(Error::Contract(format!(
            "two-maximizer branch needs 1,2,3,4 ∈ S and n ≡ 2 (mod 3), n > 3; got E = {e}, n = {n}"
        )));
    }
    let mut report = DeltaBranchReport::unprobed(n);
    for ell in ells.filter(|&l| l >= 1) {
        let value = delta_ratio(e, w, ell);
        let branch = branch_of(&value, &report.critical_delta);
        if ell % 2 == 0 {
            report.even_leaning = Some(branch);
        } else {
            report.odd_leaning = Some(branch);
        }
        report.probes.push(ProbePoint {
            ell,
            ratio: value,
            branch,
        });
    }
    let values: Vec<BigRational> = report.probes.iter().map(|p| p.ratio.clone()).collect();
    report.trend = trend_of(&values);
    report.last = values.last().cloned();
    Ok(Prediction {
        verdict: Verdict::Conditional,
        mechanism: Mechanism::DeltaBranch,
        detail: Detail::Delta(report),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn report(p: &Prediction) -> &DeltaBranchReport {
        match &p.detail {
            Detail::Delta(r) => r,
            other => panic!("unexpected detail {other:?}"),
        }
    }

    #[test]
    fn power_family_probe() {
        let e = ExceptionSet::empty();
        let p = classify_delta_branch(&e, 11, &WeightFamily::power(), 1..=10).unwrap();
        assert_eq!(p.verdict, Verdict::Conditional);
        let r = report(&p);
        assert_eq!(r.probes.len(), 10);
        // g(4) = 1 + 2^ℓ + 4^ℓ, g(2) = 1 + 2^ℓ at f = n^{ℓ−1}.
        assert_eq!(r.last, Some(frac(2_099_202, 1_050_625)));
        let two_to = 1i64 << 10;
        assert_eq!(
            r.last,
            Some(frac(
                2 * (1 + two_to + two_to * two_to),
                (1 + two_to) * (1 + two_to)
            ))
        );
        assert_eq!(r.trend, Trend::Increasing);
        assert_eq!(r.critical_delta, frac(15, 9));
        assert_eq!(r.even_leaning, Some(Branch::Convex));
    }

    #[test]
    fn example2_oscillates() {
        let e = ExceptionSet::empty();
        let p = classify_delta_branch(&e, 8, &WeightFamily::example2(), 20..=30).unwrap();
        let r = report(&p);
        assert_eq!(r.trend, Trend::Oscillating);
        assert_eq!(r.even_leaning, Some(Branch::Concave));
        assert_eq!(r.odd_leaning, Some(Branch::Convex));
    }

    #[test]
    fn threshold_arithmetic() {
        assert_eq!(convex_branch_bound(&frac(2, 1)), Some(frac(8, 1)));
        assert_eq!(convex_branch_bound(&frac(1, 1)), None);
        // δ = (n+4)/(n−2) gives the bound n exactly.
        for n in [5i64, 8, 11, 29] {
            assert_eq!(convex_branch_bound(&frac(n + 4, n - 2)), Some(frac(n, 1)));
        }
    }

    #[test]
    fn rejects_other_configurations() {
        let e: ExceptionSet = "4".parse().unwrap();
        assert!(classify_delta_branch(&e, 11, &WeightFamily::power(), 1..=3).is_err());
        assert!(
            classify_delta_branch(&ExceptionSet::empty(), 9, &WeightFamily::power(), 1..=3)
                .is_err()
        );
    }

    #[test]
    fn trend_classes() {
        let v = |xs: &[i64]| xs.iter().map(|&x| frac(x, 1)).collect::<Vec<_>>();
        assert_eq!(trend_of(&v(&[1])), Trend::Insufficient);
        assert_eq!(trend_of(&v(&[2, 2, 2])), Trend::Constant);
        assert_eq!(trend_of(&v(&[3, 2, 1])), Trend::Decreasing);
        assert_eq!(trend_of(&v(&[1, 3, 1, 3])), Trend::Oscillating);
        assert_eq!(trend_of(&v(&[1, 3, 4, 2])), Trend::Mixed);
    }
}

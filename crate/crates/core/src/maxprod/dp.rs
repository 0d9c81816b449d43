use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{MaxProdReport, PartitionMultiset};
use crate::model::ExceptionSet;

/// Top two distinct products for every sum `0..=n`.
fn top_two_products(parts: &[u64], n: usize) -> Vec<Vec<BigUint>> {
    let mut top: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    top.push(vec![BigUint::one()]);
    for s in 1..=n {
        let mut best: Vec<BigUint> = Vec::with_capacity(2);
        for &m in parts.iter().take_while(|&&m| m as usize <= s) {
            for prev in &top[s - m as usize] {
                let cand = prev * m;
                insert_top_two(&mut best, cand);
            }
        }
        top.push(best);
    }
    top
}

fn insert_top_two(best: &mut Vec<BigUint>, cand: BigUint) {
    if best.contains(&cand) {
        return;
    }
    best.push(cand);
    best.sort_unstable_by(|a, b| b.cmp(a));
    best.truncate(2);
}

/// `M_E(n)` for every `n` in `0..=upto`.
pub fn max_products_upto(e: &ExceptionSet, upto: u64) -> Vec<BigUint> {
    let parts = e.support(upto).elements;
    top_two_products(&parts, upto as usize)
        .into_iter()
        .map(|mut t| t.swap_remove(0))
        .collect()
}

/// `M̃_E(n)`; `None` when every partition of `n` has the same product.
pub fn second_max(e: &ExceptionSet, n: u64) -> Option<BigUint> {
    let parts = e.support(n).elements;
    let mut top = top_two_products(&parts, n as usize);
    top.pop().and_then(|t| t.into_iter().nth(1))
}

/// Computes `M_E(n)`, all maximizers, `A_E(n)` and `M̃_E(n)`.
///
/// State is (remaining sum, largest allowed part); the table holds the best
/// product reachable from each state, so maximizers are enumerated in
/// non-increasing part order without duplicates.
pub fn max_product(e: &ExceptionSet, n: u64) -> MaxProdReport {
    if n <= 1 {
        return MaxProdReport::trivial(n);
    }
    let parts = e.support(n).elements;
    let size = n as usize;

    // best[s][i]: maximal product for sum s using parts[0..=i].
    let mut best: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); parts.len()]; size + 1];
    best[0].fill(BigUint::one());
    for s in 1..=size {
        for (i, &m) in parts.iter().enumerate() {
            let mut value = if i > 0 {
                best[s][i - 1].clone()
            } else {
                BigUint::zero()
            };
            if m as usize <= s {
                let with = &best[s - m as usize][i] * m;
                if with > value {
                    value = with;
                }
            }
            best[s][i] = value;
        }
    }

    let top_index = parts.len() - 1;
    let max = best[size][top_index].clone();
    let mut maximizers = Vec::new();
    let mut prefix = Vec::new();
    collect(
        &parts,
        &best,
        size,
        top_index,
        &max,
        &mut prefix,
        &mut maximizers,
    );

    let second = second_max(e, n);
    MaxProdReport::assemble(n, max, maximizers, second)
}

fn collect(
    parts: &[u64],
    best: &[Vec<BigUint>],
    remaining: usize,
    max_index: usize,
    target: &BigUint,
    prefix: &mut Vec<u64>,
    out: &mut Vec<PartitionMultiset>,
) {
    if remaining == 0 {
        if target.is_one() {
            out.push(PartitionMultiset::new(prefix.clone()));
        }
        return;
    }
    for idx in (0..=max_index).rev() {
        let m = parts[idx];
        if m as usize > remaining {
            continue;
        }
        let (quot, rem) = target.div_rem(&BigUint::from(m));
        if !rem.is_zero() || best[remaining - m as usize][idx] != quot {
            continue;
        }
        prefix.push(m);
        collect(parts, best, remaining - m as usize, idx, &quot, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> ExceptionSet {
        s.parse().unwrap()
    }

    fn pm(parts: &[u64]) -> PartitionMultiset {
        PartitionMultiset::new(parts.to_vec())
    }

    #[test]
    fn known_cases() {
        let r = max_product(&set("2,4"), 8);
        assert_eq!(r.max, BigUint::from(15u32));
        assert_eq!(r.maximizers, vec![pm(&[5, 3])]);
        assert!(r.unique);

        let r = max_product(&set("2,4,5"), 7);
        assert_eq!(r.max, BigUint::from(9u32));
        assert_eq!(r.maximizers, vec![pm(&[3, 3, 1])]);
    }

    #[test]
    fn small_and_trivial() {
        for spec in ["none", "2,4", "from:2"] {
            let r = max_product(&set(spec), 1);
            assert_eq!(r.max, BigUint::one());
            assert_eq!(r.maximizers, vec![pm(&[1])]);
            assert_eq!(r.second, None);
            let r = max_product(&set(spec), 0);
            assert_eq!(r.maximizers, vec![pm(&[])]);
        }
    }

    #[test]
    fn four_excluded() {
        let r = max_product(&set("4"), 8);
        assert_eq!(r.max, BigUint::from(18u32));
        assert_eq!(r.maximizers, vec![pm(&[3, 3, 2])]);
        assert_eq!(r.a, num_rational::BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn second_largest() {
        assert_eq!(
            second_max(&ExceptionSet::empty(), 6),
            Some(BigUint::from(8u32))
        );
        assert_eq!(second_max(&set("2,4,5"), 4), Some(BigUint::one()));
        assert_eq!(second_max(&set("4"), 9), Some(BigUint::from(24u32)));
        assert_eq!(second_max(&set("none"), 1), None);
        // Only the part 1 is available: a single product.
        assert_eq!(second_max(&set("from:2"), 7), None);
    }

    #[test]
    fn multiple_maximizers() {
        // 1,2,3,4 ∈ S: n = 7 has (4,3) and (3,2,2).
        let r = max_product(&ExceptionSet::empty(), 7);
        assert_eq!(r.max, BigUint::from(12u32));
        assert_eq!(r.maximizers, vec![pm(&[3, 2, 2]), pm(&[4, 3])]);
        assert!(!r.unique);
        assert_eq!(r.a, num_rational::BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn products_upto_is_monotone() {
        for spec in ["none", "2,4", "3", "2+from:4", "powers:2"] {
            let m = max_products_upto(&set(spec), 80);
            assert!(m.windows(2).all(|w| w[0] <= w[1]), "{spec}");
            for n in [0u64, 1, 9, 40, 80] {
                assert_eq!(m[n as usize], max_product(&set(spec), n).max);
            }
        }
    }
}

use num_bigint::BigUint;

use super::{MaxProdReport, PartitionMultiset};
use crate::error::{Error, Result};
use crate::model::ExceptionSet;

pub const BRUTE_FORCE_BOUND: u64 = 30;

/// Exhaustive enumeration of every partition of `n` into parts from `S`.
/// Refuses `n` above [`BRUTE_FORCE_BOUND`].
pub fn max_product_bruteforce(e: &ExceptionSet, n: u64) -> Result<MaxProdReport> {
    max_product_bruteforce_bounded(e, n, BRUTE_FORCE_BOUND)
}

pub fn max_product_bruteforce_bounded(
    e: &ExceptionSet,
    n: u64,
    bound: u64,
) -> Result<MaxProdReport> {
    if n > bound {
        return Err(Error::TooLarge {
            n: n as usize,
            bound: bound as usize,
        });
    }
    let parts: Vec<u64> = (1..=n).filter(|&m| e.allows(m)).collect();
    let mut all = Vec::new();
    let mut prefix = Vec::new();
    walk(&parts, n, parts.len(), &mut prefix, &mut all);

    let products: Vec<BigUint> = all.iter().map(PartitionMultiset::product).collect();
    let max = products
        .iter()
        .max()
        .cloned()
        .expect("1 ∈ S so a partition exists");
    let second = products.iter().filter(|&p| p < &max).max().cloned();
    let maximizers = all
        .into_iter()
        .zip(&products)
        .filter(|(_, p)| **p == max)
        .map(|(part, _)| part)
        .collect();
    Ok(MaxProdReport::assemble(n, max, maximizers, second))
}

fn walk(
    parts: &[u64],
    remaining: u64,
    limit: usize,
    prefix: &mut Vec<u64>,
    out: &mut Vec<PartitionMultiset>,
) {
    if remaining == 0 {
        out.push(PartitionMultiset::new(prefix.clone()));
        return;
    }
    for i in 0..limit {
        let m = parts[i];
        if m > remaining {
            break;
        }
        prefix.push(m);
        walk(parts, remaining - m, i + 1, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = max_product_bruteforce(&"2,4".parse().unwrap(), 8).unwrap();
        assert_eq!(r.max, BigUint::from(15u32));

        let r = max_product_bruteforce(&ExceptionSet::empty(), 6).unwrap();
        assert_eq!(r.max, BigUint::from(9u32));
        assert_eq!(r.maximizers, vec![PartitionMultiset::new(vec![3, 3])]);
        assert_eq!(r.second, Some(BigUint::from(8u32)));

        let r = max_product_bruteforce(&"3".parse().unwrap(), 0).unwrap();
        assert_eq!(r.max, BigUint::from(1u32));
        assert_eq!(r.maximizers, vec![PartitionMultiset::new(vec![])]);
        assert_eq!(r.second, None);
    }

    #[test]
    fn refuses_large_inputs() {
        assert!(matches!(
            max_product_bruteforce(&ExceptionSet::empty(), 31),
            Err(Error::TooLarge { n: 31, bound: 30 })
        ));
    }
}

//! Divisor sums restricted to the support.

use super::ExceptionSet;

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of 0 are not defined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `σ_{E,1}(n) = Σ_{d | n, d ∉ E} d`.
pub fn sigma_e1(e: &ExceptionSet, n: u64) -> u64 {
    divisors(n).into_iter().filter(|&d| !e.member(d)).sum()
}

/// The largest divisor of `n` lying in the support. Always defined since `1 ∈ S`.
pub fn largest_s_divisor(e: &ExceptionSet, n: u64) -> u64 {
    divisors(n)
        .into_iter()
        .rev()
        .find(|&d| !e.member(d))
        .expect("1 is always in the support")
}

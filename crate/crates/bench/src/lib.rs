//! Shared inputs for the criterion benchmarks.

use eulerprod::{ExceptionSet, WeightFamily};

/// Exception sets benchmarked, labelled for report names.
pub fn fixtures() -> Vec<(&'static str, ExceptionSet)> {
    [("none", "none"), ("e24", "2,4"), ("powers2", "powers:2")]
        .into_iter()
        .map(|(label, spec)| (label, spec.parse().expect("fixture spec")))
        .collect()
}

pub fn power() -> WeightFamily {
    WeightFamily::power()
}

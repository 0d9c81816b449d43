//! Exception sets, weight families and restricted divisor sums.

mod arith;
mod exceptions;
mod weights;

pub use arith::{divisors, largest_s_divisor, sigma_e1};
pub use exceptions::{ExceptionFamily, ExceptionSet, SupportView};
pub use weights::{CustomWeights, Exponent, GapValue, WeightFamily};

//! Exact computation and sign analysis for restricted Euler products
//! `∏_{m∈S} (1 − q^m)^{−f_ℓ(m)}`, where `S` is the set of positive integers
//! outside an exception set `E`.
//!
//! The coefficients `p_{E,ℓ}(n)` are computed as big integers. Their Turán
//! differences `Δ(n) = p(n)² − p(n−1)p(n+1)` are compared against predictions
//! derived from maximal products of parts in `S`.

pub mod classify;
pub mod error;
pub mod exact;
pub mod harness;
pub mod maxprod;
pub mod model;
pub mod qseries;

pub use classify::{classify, ClassifyOptions, DeltaProbe, Mechanism, Prediction, Verdict};
pub use error::{Error, Result};
pub use maxprod::{max_product, MaxProdReport, PartitionMultiset};
pub use model::{ExceptionSet, WeightFamily};
pub use qseries::{coefficients, Method, PartitionTable, Sign};

//! Exact coefficients of `∏_{m∈S} (1 − q^m)^{−f_ℓ(m)}`.
//!
//! Two independent routes produce the same table: the log-derivative
//! recurrence `n·p(n) = Σ_{k=1}^{n} g(k)·p(n−k)` driven by the divisor sums
//! `g_{E,ℓ}`, and the literal truncated product of negative-binomial series.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{largest_s_divisor, sigma_e1, ExceptionSet, WeightFamily};

/// The fixed `(E, f, ℓ)` a table was computed for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub exceptions: ExceptionSet,
    pub weights: WeightFamily,
    pub ell: u32,
}

/// `g_{E,ℓ}(n) = Σ_{d | n, d ∉ E} d·f_ℓ(d)` for `1 ≤ n ≤ N`.
#[derive(Clone, Debug)]
pub struct GTable {
    pub context: Context,
    values: Vec<BigUint>,
}

impl GTable {
    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    /// `g(n)` for `1 ≤ n ≤ N`.
    pub fn get(&self, n: usize) -> &BigUint {
        assert!(
            n >= 1 && n <= self.horizon(),
            "g({n}) outside 1..={}",
            self.horizon()
        );
        &self.values[n]
    }

    /// `(n_S)^{Φ+1} ≤ g(n) ≤ σ_{E,1}(n)·(n_S)^{Ψ}`, decided exactly. `None` when
    /// the envelope is not integral.
    pub fn fundamental_bounds_hold(&self, n: usize) -> Option<bool> {
        let ctx = &self.context;
        let (phi, psi) = ctx.weights.integer_envelope(ctx.ell)?;
        let top = BigUint::from(largest_s_divisor(&ctx.exceptions, n as u64));
        let lower = top.pow(u32::try_from(phi + 1).ok()?);
        let upper =
            BigUint::from(sigma_e1(&ctx.exceptions, n as u64)) * top.pow(u32::try_from(psi).ok()?);
        let g = self.get(n);
        Some(&lower <= g && g <= &upper)
    }
}

pub fn g_table(e: &ExceptionSet, w: &WeightFamily, ell: u32, horizon: usize) -> GTable {
    let mut values = vec![BigUint::zero(); horizon + 1];
    for d in 1..=horizon {
        if e.member(d as u64) {
            continue;
        }
        let term = w.divisor_term(ell, d as u64);
        for multiple in (d..=horizon).step_by(d) {
            values[multiple] += &term;
        }
    }
    GTable {
        context: Context {
            exceptions: e.clone(),
            weights: w.clone(),
            ell,
        },
        values,
    }
}

/// Which route computes the coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Recurrence,
    Product,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recurrence" => Ok(Method::Recurrence),
            "product" => Ok(Method::Product),
            other => Err(Error::parse("method", s, other)),
        }
    }
}

/// `p_{E,ℓ}(0..=N)`.
#[derive(Clone, Debug)]
pub struct PartitionTable {
    pub context: Context,
    coeffs: Vec<BigUint>,
}

impl PartitionTable {
    pub fn horizon(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.coeffs[n]
    }

    /// `Δ(n) = p(n)² − p(n−1)·p(n+1)` for `1 ≤ n ≤ N − 1`.
    pub fn delta(&self, n: usize) -> Result<DeltaValue> {
        let hi = self.horizon().saturating_sub(1);
        if n < 1 || n > hi {
            return Err(Error::OutOfRange {
                index: n,
                lo: 1,
                hi,
            });
        }
        let square = BigInt::from(&self.coeffs[n] * &self.coeffs[n]);
        let cross = BigInt::from(&self.coeffs[n - 1] * &self.coeffs[n + 1]);
        Ok(DeltaValue::new(n, square - cross))
    }

    /// Every defined `Δ(n)`, `1 ≤ n ≤ N − 1`.
    pub fn deltas(&self) -> Vec<DeltaValue> {
        (1..self.horizon())
            .map(|n| self.delta(n).expect("in range"))
            .collect()
    }
}

pub fn coeffs_by_recurrence(
    e: &ExceptionSet,
    w: &WeightFamily,
    ell: u32,
    horizon: usize,
) -> Result<PartitionTable> {
    let g = g_table(e, w, ell, horizon.max(1));
    let mut coeffs: Vec<BigUint> = Vec::with_capacity(horizon + 1);
    coeffs.push(BigUint::one());
    for n in 1..=horizon {
        let mut acc = BigUint::zero();
        for k in 1..=n {
            acc += g.get(k) * &coeffs[n - k];
        }
        let (quot, rem) = acc.div_rem(&BigUint::from(n));
        if !rem.is_zero() {
            return Err(Error::InexactDivision { n });
        }
        coeffs.push(quot);
    }
    Ok(PartitionTable {
        context: g.context,
        coeffs,
    })
}

pub fn coeffs_by_product(
    e: &ExceptionSet,
    w: &WeightFamily,
    ell: u32,
    horizon: usize,
) -> PartitionTable {
    let mut coeffs = vec![BigUint::zero(); horizon + 1];
    coeffs[0] = BigUint::one();
    for part in e.support(horizon as u64).elements {
        let m = part as usize;
        let f = w.eval(ell, part);
        // C(f + j − 1, j), built incrementally.
        let mut series = Vec::with_capacity(horizon / m + 1);
        series.push(BigUint::one());
        for j in 1..=horizon / m {
            let prev: &BigUint = series.last().unwrap();
            let next = prev * (&f + BigUint::from(j - 1)) / BigUint::from(j);
            series.push(next);
        }
        for n in (m..=horizon).rev() {
            let mut acc = BigUint::zero();
            for (j, c) in series.iter().enumerate().skip(1) {
                let Some(idx) = n.checked_sub(j * m) else {
                    break;
                };
                acc += c * &coeffs[idx];
            }
            coeffs[n] += acc;
        }
    }
    PartitionTable {
        context: Context {
            exceptions: e.clone(),
            weights: w.clone(),
            ell,
        },
        coeffs,
    }
}

pub fn coefficients(
    e: &ExceptionSet,
    w: &WeightFamily,
    ell: u32,
    horizon: usize,
    method: Method,
) -> Result<PartitionTable> {
    match method {
        Method::Recurrence => coeffs_by_recurrence(e, w, ell, horizon),
        Method::Product => Ok(coeffs_by_product(e, w, ell, horizon)),
    }
}

/// Number of partitions into parts from `S`: the table for `f ≡ 1`.
pub fn unit_table(e: &ExceptionSet, horizon: usize) -> Result<PartitionTable> {
    coeffs_by_recurrence(e, &WeightFamily::power(), 1, horizon)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(value: &T) -> Self {
        if value.is_positive() {
            Sign::Positive
        } else if value.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            -1 => Some(Sign::Negative),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Positive),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Sign::from_i8(v).ok_or_else(|| serde::de::Error::custom(format!("bad sign {v}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaValue {
    pub n: usize,
    pub value: BigInt,
    pub sign: Sign,
}

impl DeltaValue {
    fn new(n: usize, value: BigInt) -> Self {
        let sign = Sign::of(&value);
        Self { n, value, sign }
    }
}

/// Checks `M^{Φ(ℓ)}/k! ≤ p_{E,ℓ}(n) ≤ p_{E,1}(n)·M^{Ψ(ℓ)}` exactly, where `M` is
/// the maximal product at `n` and `k` the part count of a maximizer. `unit`
/// must be the `f ≡ 1` table for the same exception set.
pub fn check_bounds(
    table: &PartitionTable,
    unit: &PartitionTable,
    n: usize,
    max_product: &BigUint,
    parts: usize,
) -> Result<bool> {
    let ctx = &table.context;
    if unit.context.ell != 1
        || !unit.context.weights.is_normalized()
        || unit.context.exceptions != ctx.exceptions
    {
        return Err(Error::Contract(
            "bounds need the f ≡ 1 table of the same exception set".into(),
        ));
    }
    if n > table.horizon() || n > unit.horizon() {
        return Err(Error::OutOfRange {
            index: n,
            lo: 0,
            hi: table.horizon().min(unit.horizon()),
        });
    }
    let (phi, psi) = ctx
        .weights
        .integer_envelope(ctx.ell)
        .filter(|(phi, _)| *phi >= 0)
        .ok_or_else(|| Error::Contract("bounds need a non-negative integral envelope".into()))?;
    let factorial: BigUint = (1..=parts as u64).map(BigUint::from).product();
    let p = table.get(n);
    let lower_ok = &factorial * p >= max_product.pow(phi as u32);
    let upper_ok = p <= &(unit.get(n) * max_product.pow(psi as u32));
    Ok(lower_ok && upper_ok)
}

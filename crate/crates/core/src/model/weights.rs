//! Weight families `f_ℓ`.
//!
//! Every family handled here is a pure power of the part: `f_ℓ(n) = n^{e_n(ℓ)}`,
//! where the exponent `e_n(ℓ)` is an affine function of `ℓ` plus an optional
//! alternating `(-1)^ℓ` term, with per-part overrides on top of a base
//! exponent. The growth envelope `Φ`, `Ψ` uses the same exponent shape, so the
//! envelope conditions can be decided exactly instead of sampled.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `a·ℓ + b + c·(-1)^ℓ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub ell: i64,
    pub constant: i64,
    pub alternating: i64,
}

impl Exponent {
    pub const fn new(ell: i64, constant: i64, alternating: i64) -> Self {
        Self {
            ell,
            constant,
            alternating,
        }
    }

    pub fn at(&self, ell: u32) -> i64 {
        let sign = if ell.is_multiple_of(2) { 1 } else { -1 };
        self.ell * i64::from(ell) + self.constant + self.alternating * sign
    }

    fn minus(&self, other: &Exponent) -> Exponent {
        Exponent::new(
            self.ell - other.ell,
            self.constant - other.constant,
            self.alternating - other.alternating,
        )
    }

    /// Smallest and largest value over `ℓ ≥ 1`, assuming no `ℓ` term.
    fn bounded_range(&self) -> (i64, i64) {
        debug_assert_eq!(self.ell, 0);
        let (a, b) = (self.at(1), self.at(2));
        (a.min(b), a.max(b))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut push = |coeff: i64, unit: &str| {
            if coeff == 0 {
                return;
            }
            let sign = if coeff < 0 { "-" } else { "+" };
            if !out.is_empty() || coeff < 0 {
                out.push_str(sign);
            }
            let mag = coeff.unsigned_abs();
            match (mag, unit) {
                (_, "") => out.push_str(&mag.to_string()),
                (1, u) => out.push_str(u),
                (m, u) => out.push_str(&format!("{m}*{u}")),
            }
        };
        push(self.ell, "ell");
        push(self.constant, "");
        push(self.alternating, "(-1)^ell");
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Sums of terms `k`, `[k*]ell`, `[k*](-1)^ell`; `l` is accepted for `ell`.
    fn from_str(input: &str) -> Result<Self> {
        let what = "exponent formula";
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse(what, input, ""));
        }
        // Split into signed terms, keeping the sign inside "(-1)" intact.
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut depth = 0usize;
        let mut current = String::new();
        let mut sign = 1i64;
        for (i, ch) in compact.char_indices() {
            match ch {
                '(' => {
                    depth += 1;
                    current.push(ch);
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    current.push(ch);
                }
                '+' | '-' if depth == 0 => {
                    if current.is_empty() && i != 0 {
                        return Err(Error::parse(what, input, &compact[i..]));
                    }
                    if !current.is_empty() {
                        terms.push((sign, std::mem::take(&mut current)));
                    }
                    sign = if ch == '-' { -1 } else { 1 };
                }
                _ => current.push(ch),
            }
        }
        if current.is_empty() {
            return Err(Error::parse(what, input, &compact));
        }
        terms.push((sign, current));

        let mut exp = Exponent::default();
        for (sign, term) in terms {
            let (coeff, unit) = match term.split_once('*') {
                Some((k, unit)) => {
                    let k: i64 = k.parse().map_err(|_| Error::parse(what, input, &term))?;
                    (k, unit.to_string())
                }
                None => (1, term.clone()),
            };
            match unit.as_str() {
                "ell" | "l" => exp.ell += sign * coeff,
                "(-1)^ell" | "(-1)^l" => exp.alternating += sign * coeff,
                digits if term.split_once('*').is_none() => {
                    let k: i64 = digits
                        .parse()
                        .map_err(|_| Error::parse(what, input, &term))?;
                    exp.constant += sign * k;
                }
                _ => return Err(Error::parse(what, input, &term)),
            }
        }
        Ok(exp)
    }
}

/// A sequence of arithmetic functions `f_ℓ : ℕ → ℕ` together with its growth
/// envelope `n^{Φ(ℓ)} ≤ f_ℓ(n) ≤ n^{Ψ(ℓ)}` and gap bound `Ψ − Φ ≤ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFamily {
    id: String,
    base: Exponent,
    overrides: BTreeMap<u64, Exponent>,
    phi: Exponent,
    psi: Exponent,
    envelope_gap: Rational64,
}

impl WeightFamily {
    /// `f_ℓ(n) = n^{ℓ-1}`.
    pub fn power() -> Self {
        let e = Exponent::new(1, -1, 0);
        Self::build("power", e, BTreeMap::new(), e, e, Rational64::zero())
            .expect("built-in family is valid")
    }

    /// The power family with `f_ℓ(2) = 2^ℓ`.
    pub fn example1() -> Self {
        let base = Exponent::new(1, -1, 0);
        let overrides = BTreeMap::from([(2, Exponent::new(1, 0, 0))]);
        Self::build(
            "example1",
            base,
            overrides,
            base,
            Exponent::new(1, 0, 0),
            Rational64::one(),
        )
        .expect("built-in family is valid")
    }

    /// `f_ℓ(n) = n^ℓ` except `f_ℓ(2) = 2^{ℓ+(-1)^ℓ}` and `f_ℓ(4) = 4^{ℓ-(-1)^ℓ}`.
    pub fn example2() -> Self {
        let overrides = BTreeMap::from([(2, Exponent::new(1, 0, 1)), (4, Exponent::new(1, 0, -1))]);
        Self::build(
            "example2",
            Exponent::new(1, 0, 0),
            overrides,
            Exponent::new(1, -1, 0),
            Exponent::new(1, 1, 0),
            Rational64::from_integer(2),
        )
        .expect("built-in family is valid")
    }

    /// Parses `power | example1 | example2 | custom:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec.trim() {
            "power" => Ok(Self::power()),
            "example1" => Ok(Self::example1()),
            "example2" => Ok(Self::example2()),
            other => match other.strip_prefix("custom:") {
                Some(path) if !path.is_empty() => Self::from_file(Path::new(path)),
                _ => Err(Error::parse("weight family", spec, other)),
            },
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file: CustomWeights = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        file.into_family(format!("custom:{}", path.display()))
    }

    /// Validates and assembles a family. The envelope conditions are checked
    /// exactly for every `ℓ ≥ 1`.
    pub fn build(
        id: impl Into<String>,
        base: Exponent,
        overrides: BTreeMap<u64, Exponent>,
        phi: Exponent,
        psi: Exponent,
        envelope_gap: Rational64,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidWeights(msg));
        if envelope_gap.is_negative() {
            return invalid(format!("B = {envelope_gap} is negative"));
        }
        if phi.ell <= 0 {
            return invalid(format!("Φ(ℓ) = {phi} does not tend to infinity"));
        }
        if psi.ell != phi.ell {
            return invalid(format!("Ψ(ℓ) − Φ(ℓ) = {} is unbounded", psi.minus(&phi)));
        }
        let (gap_lo, gap_hi) = psi.minus(&phi).bounded_range();
        if gap_lo < 0 {
            return invalid("Ψ(ℓ) < Φ(ℓ) for some ℓ".into());
        }
        if Rational64::from_integer(gap_hi) > envelope_gap {
            return invalid(format!("Ψ(ℓ) − Φ(ℓ) reaches {gap_hi} > B = {envelope_gap}"));
        }
        if overrides.contains_key(&0) {
            return invalid("override for part 0".into());
        }
        for (part, e) in
            std::iter::once((None, &base)).chain(overrides.iter().map(|(k, v)| (Some(k), v)))
        {
            let label = part.map_or_else(|| "base".to_string(), |k| format!("part {k}"));
            if e.ell != phi.ell {
                return invalid(format!(
                    "{label} exponent {e} leaves the envelope for large ℓ"
                ));
            }
            let (lo, _) = e.minus(&phi).bounded_range();
            let (_, hi) = e.minus(&psi).bounded_range();
            if lo < 0 || hi > 0 {
                return invalid(format!(
                    "{label} exponent {e} leaves the envelope [{phi}, {psi}]"
                ));
            }
            if e.at(1).min(e.at(2)) < 0 {
                return invalid(format!("{label} exponent {e} gives non-integral weights"));
            }
        }
        Ok(Self {
            id: id.into(),
            base,
            overrides,
            phi,
            psi,
            envelope_gap,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// The exponent `e` with `f_ℓ(n) = n^e`.
    pub fn exponent(&self, ell: u32, n: u64) -> u32 {
        let e = self.overrides.get(&n).unwrap_or(&self.base).at(ell);
        u32::try_from(e).expect("validated exponents are non-negative")
    }

    /// `f_ℓ(n)` as an exact natural.
    pub fn eval(&self, ell: u32, n: u64) -> BigUint {
        assert!(ell >= 1 && n >= 1, "weights are defined for ℓ, n ≥ 1");
        BigUint::from(n).pow(self.exponent(ell, n))
    }

    /// `n · f_ℓ(n)`, the contribution of the divisor `n` to `g_{E,ℓ}`.
    pub fn divisor_term(&self, ell: u32, n: u64) -> BigUint {
        BigUint::from(n).pow(self.exponent(ell, n) + 1)
    }

    pub fn phi(&self, ell: u32) -> Rational64 {
        Rational64::from_integer(self.phi.at(ell))
    }

    pub fn psi(&self, ell: u32) -> Rational64 {
        Rational64::from_integer(self.psi.at(ell))
    }

    pub fn envelope_gap(&self) -> Rational64 {
        self.envelope_gap
    }

    pub fn phi_formula(&self) -> Exponent {
        self.phi
    }

    pub fn psi_formula(&self) -> Exponent {
        self.psi
    }

    /// `Φ(ℓ)` and `Ψ(ℓ)` as integers, when they are.
    pub fn integer_envelope(&self, ell: u32) -> Option<(i64, i64)> {
        let (phi, psi) = (self.phi(ell), self.psi(ell));
        (phi.is_integer() && psi.is_integer()).then(|| (phi.to_integer(), psi.to_integer()))
    }

    /// Checks `n^Φ ≤ f_ℓ(n) ≤ n^Ψ` by exact integer comparison; `None` when the
    /// envelope exponents are not integers or are negative.
    pub fn envelope_holds(&self, ell: u32, n: u64) -> Option<bool> {
        let (phi, psi) = self.integer_envelope(ell)?;
        let lo = BigUint::from(n).pow(u32::try_from(phi).ok()?);
        let hi = BigUint::from(n).pow(u32::try_from(psi).ok()?);
        let f = self.eval(ell, n);
        Some(lo <= f && f <= hi)
    }

    /// `f_1 ≡ 1`.
    pub fn is_normalized(&self) -> bool {
        self.base.at(1) == 0 && self.overrides.values().all(|e| e.at(1) == 0)
    }

    pub fn to_custom(&self) -> CustomWeights {
        CustomWeights {
            base: self.base.to_string(),
            overrides: self
                .overrides
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            phi: self.phi.to_string(),
            psi: self.psi.to_string(),
            gap: GapValue::Text(self.envelope_gap.to_string()),
        }
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// On-disk form of a custom weight family:
/// `{"base": "ell-1", "overrides": {"2": "ell"}, "phi": "ell-1", "psi": "ell", "B": 1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CustomWeights {
    pub base: String,
    #[serde(default)]
    pub overrides: BTreeMap<String, String>,
    pub phi: String,
    pub psi: String,
    #[serde(rename = "B")]
    pub gap: GapValue,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GapValue {
    Int(i64),
    Text(String),
}

impl CustomWeights {
    pub fn into_family(self, id: String) -> Result<WeightFamily> {
        let base: Exponent = self.base.parse()?;
        let mut overrides = BTreeMap::new();
        for (k, v) in &self.overrides {
            let part: u64 = k
                .trim()
                .parse()
                .map_err(|_| Error::parse("override part", k, k))?;
            overrides.insert(part, v.parse()?);
        }
        let gap = match &self.gap {
            GapValue::Int(b) => Rational64::from_integer(*b),
            GapValue::Text(s) => s
                .trim()
                .parse::<Rational64>()
                .map_err(|_| Error::parse("envelope gap", s, s))?,
        };
        WeightFamily::build(
            id,
            base,
            overrides,
            self.phi.parse()?,
            self.psi.parse()?,
            gap,
        )
    }
}

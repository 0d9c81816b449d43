use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A parametric family of excluded integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "k", rename_all = "kebab-case")]
pub enum ExceptionFamily {
    /// `{k^m : m >= 1}`
    PowersOf(u64),
    /// `{k*m : m >= 1}`
    MultiplesOf(u64),
    /// `{m : m >= k}`; makes the support finite.
    From(u64),
}

impl ExceptionFamily {
    pub fn contains(&self, n: u64) -> bool {
        match *self {
            ExceptionFamily::PowersOf(k) => {
                let mut p = k;
                while p < n {
                    match p.checked_mul(k) {
                        Some(next) => p = next,
                        None => return false,
                    }
                }
                p == n
            }
            ExceptionFamily::MultiplesOf(k) => n.is_multiple_of(k),
            ExceptionFamily::From(k) => n >= k,
        }
    }

    fn base(&self) -> u64 {
        match *self {
            ExceptionFamily::PowersOf(k)
            | ExceptionFamily::MultiplesOf(k)
            | ExceptionFamily::From(k) => k,
        }
    }
}

impl fmt::Display for ExceptionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExceptionFamily::PowersOf(k) => write!(f, "powers:{k}"),
            ExceptionFamily::MultiplesOf(k) => write!(f, "multiples:{k}"),
            ExceptionFamily::From(k) => write!(f, "from:{k}"),
        }
    }
}

/// The exception set `E`: the parts that may not occur. Its complement is the
/// support `S`, which always contains 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExceptionSet {
    atoms: BTreeSet<u64>,
    families: Vec<ExceptionFamily>,
}

impl ExceptionSet {
    /// No exceptions at all.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(
        atoms: impl IntoIterator<Item = u64>,
        families: impl IntoIterator<Item = ExceptionFamily>,
    ) -> Result<Self> {
        let atoms: BTreeSet<u64> = atoms.into_iter().collect();
        if atoms.contains(&0) {
            return Err(Error::InvalidExceptions(
                "0 is not a positive integer".into(),
            ));
        }
        if atoms.contains(&1) {
            return Err(Error::InvalidExceptions(
                "1 must stay in the support".into(),
            ));
        }
        let mut families: Vec<ExceptionFamily> = families.into_iter().collect();
        for fam in &families {
            if fam.base() < 2 {
                return Err(Error::InvalidExceptions(format!(
                    "{fam} would exclude 1 from the support"
                )));
            }
        }
        families.sort();
        families.dedup();
        Ok(Self { atoms, families })
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::new(atoms, [])
    }

    /// The exception set whose support is exactly `support` (which must contain 1).
    pub fn with_finite_support(support: &[u64]) -> Result<Self> {
        let set: BTreeSet<u64> = support.iter().copied().collect();
        if !set.contains(&1) {
            return Err(Error::InvalidExceptions("support must contain 1".into()));
        }
        let top = *set.iter().next_back().unwrap();
        let atoms = (2..top).filter(|n| !set.contains(n));
        Self::new(atoms, [ExceptionFamily::From(top + 1)])
    }

    pub fn atoms(&self) -> &BTreeSet<u64> {
        &self.atoms
    }

    pub fn families(&self) -> &[ExceptionFamily] {
        &self.families
    }

    /// True iff `n` is an exception.
    pub fn member(&self, n: u64) -> bool {
        debug_assert!(n >= 1);
        self.atoms.contains(&n) || self.families.iter().any(|f| f.contains(n))
    }

    /// True iff `n` is an allowed part.
    pub fn allows(&self, n: u64) -> bool {
        n >= 1 && !self.member(n)
    }

    /// `E ∩ [1, horizon]`, ascending.
    pub fn enumerate(&self, horizon: u64) -> Vec<u64> {
        let mut out: BTreeSet<u64> = self.atoms.range(..=horizon).copied().collect();
        for fam in &self.families {
            match *fam {
                ExceptionFamily::PowersOf(k) => {
                    let mut p = k;
                    while p <= horizon {
                        out.insert(p);
                        match p.checked_mul(k) {
                            Some(next) => p = next,
                            None => break,
                        }
                    }
                }
                ExceptionFamily::MultiplesOf(k) => {
                    out.extend((1..=horizon / k).map(|m| m * k));
                }
                ExceptionFamily::From(k) => out.extend(k..=horizon),
            }
        }
        out.into_iter().collect()
    }

    /// `S ∩ [1, horizon]`.
    pub fn support(&self, horizon: u64) -> SupportView {
        SupportView {
            source: self.clone(),
            horizon,
            elements: (1..=horizon).filter(|&n| !self.member(n)).collect(),
        }
    }

    /// The whole support when it is finite (only possible through `from:k`).
    pub fn finite_support(&self) -> Option<Vec<u64>> {
        let cutoff = self
            .families
            .iter()
            .filter_map(|f| match f {
                ExceptionFamily::From(k) => Some(*k),
                _ => None,
            })
            .min()?;
        Some((1..cutoff).filter(|&n| !self.member(n)).collect())
    }

    /// The least element of the support above 1, if the support has one.
    pub fn second_part(&self) -> Option<u64> {
        match self.finite_support() {
            Some(s) => s.get(1).copied(),
            // An infinite support always has another element.
            None => (2..).find(|&n| !self.member(n)),
        }
    }
}

impl fmt::Display for ExceptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens = Vec::new();
        if !self.atoms.is_empty() {
            let atoms: Vec<String> = self.atoms.iter().map(u64::to_string).collect();
            tokens.push(atoms.join(","));
        }
        tokens.extend(self.families.iter().map(ToString::to_string));
        if tokens.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&tokens.join("+"))
        }
    }
}

impl FromStr for ExceptionSet {
    type Err = Error;

    /// Grammar: `+`-joined tokens, each a comma-separated list of atoms or one of
    /// `powers:k`, `multiples:k`, `from:k`. `none` (or an empty string) is `∅`.
    fn from_str(input: &str) -> Result<Self> {
        let what = "exception set";
        let trimmed = input.trim();
        if trimmed.is_empty() || trimmed == "none" || trimmed == "{}" {
            return Ok(Self::empty());
        }
        let mut atoms = Vec::new();
        let mut families = Vec::new();
        for token in trimmed.split('+').map(str::trim) {
            if token.is_empty() {
                return Err(Error::parse(what, input, token));
            }
            if let Some((kind, arg)) = token.split_once(':') {
                let k: u64 = arg
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(what, input, token))?;
                let fam = match kind.trim() {
                    "powers" => ExceptionFamily::PowersOf(k),
                    "multiples" => ExceptionFamily::MultiplesOf(k),
                    "from" => ExceptionFamily::From(k),
                    _ => return Err(Error::parse(what, input, token)),
                };
                if k < 2 {
                    return Err(Error::parse(what, input, token));
                }
                families.push(fam);
            } else {
                for atom in token.split(',').map(str::trim) {
                    match atom.parse::<u64>() {
                        Ok(a) if a >= 2 => atoms.push(a),
                        _ => return Err(Error::parse(what, input, atom)),
                    }
                }
            }
        }
        Self::new(atoms, families)
    }
}

/// `S ∩ [1, N]` for a fixed horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportView {
    pub source: ExceptionSet,
    pub horizon: u64,
    pub elements: Vec<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn membership_examples() {
        let e: ExceptionSet = "2,4".parse().unwrap();
        assert!(e.member(4));
        let p2: ExceptionSet = "powers:2".parse().unwrap();
        assert!(p2.member(8));
        assert!(!p2.member(6));
        assert!(!p2.member(1));
        let e3: ExceptionSet = "3".parse().unwrap();
        assert!(!e3.member(1));
    }

    #[test]
    fn one_is_never_excluded() {
        assert!(ExceptionSet::from_atoms([1, 3]).is_err());
        assert!("1,3".parse::<ExceptionSet>().is_err());
        assert!("multiples:1".parse::<ExceptionSet>().is_err());
        assert!("powers:1".parse::<ExceptionSet>().is_err());
        assert!("from:1".parse::<ExceptionSet>().is_err());
    }

    #[test]
    fn parse_errors_name_the_token() {
        match "3 + cubes:2".parse::<ExceptionSet>() {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "cubes:2"),
            other => panic!("unexpected {other:?}"),
        }
        match "2,x".parse::<ExceptionSet>() {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "x"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mixed_grammar() {
        let e: ExceptionSet = "3 + powers:5".parse().unwrap();
        assert_eq!(e.enumerate(30), vec![3, 5, 25]);
        let m: ExceptionSet = "multiples:3".parse().unwrap();
        assert_eq!(m.enumerate(10), vec![3, 6, 9]);
    }

    #[test]
    fn finite_support() {
        let s13 = ExceptionSet::with_finite_support(&[1, 3]).unwrap();
        assert_eq!(s13.to_string(), "2+from:4");
        assert_eq!(s13.finite_support(), Some(vec![1, 3]));
        assert_eq!(s13.support(10).elements, vec![1, 3]);
        assert_eq!(s13.second_part(), Some(3));
        assert_eq!(ExceptionSet::empty().finite_support(), None);
        assert_eq!(
            "powers:2".parse::<ExceptionSet>().unwrap().second_part(),
            Some(3)
        );
        let only_one = ExceptionSet::with_finite_support(&[1]).unwrap();
        assert_eq!(only_one.second_part(), None);
    }

    #[test]
    fn support_view_invariants() {
        let e: ExceptionSet = "2,4 + multiples:7".parse().unwrap();
        let view = e.support(50);
        assert_eq!(view.elements[0], 1);
        assert!(view.elements.windows(2).all(|w| w[0] < w[1]));
    }

    fn family_strategy() -> impl Strategy<Value = ExceptionFamily> {
        prop_oneof![
            (2u64..12).prop_map(ExceptionFamily::PowersOf),
            (2u64..12).prop_map(ExceptionFamily::MultiplesOf),
            (2u64..200).prop_map(ExceptionFamily::From),
        ]
    }

    fn set_strategy() -> impl Strategy<Value = ExceptionSet> {
        (
            proptest::collection::btree_set(2u64..60, 0..6),
            proptest::collection::vec(family_strategy(), 0..3),
        )
            .prop_map(|(atoms, fams)| ExceptionSet::new(atoms, fams).unwrap())
    }

    proptest! {
        #[test]
        fn enumerate_agrees_with_member(e in set_strategy()) {
            let horizon = 10_000;
            let listed: BTreeSet<u64> = e.enumerate(horizon).into_iter().collect();
            for n in 1..=horizon {
                prop_assert_eq!(listed.contains(&n), e.member(n), "n = {}", n);
            }
            prop_assert!(!e.member(1));
        }

        #[test]
        fn display_parses_back(e in set_strategy()) {
            let back: ExceptionSet = e.to_string().parse().unwrap();
            prop_assert_eq!(back, e);
        }
    }
}

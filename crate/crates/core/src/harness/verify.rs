use std::collections::BTreeMap;
use std::time::Duration;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::grid::{sweep_with, SweepOptions};
use super::stabilize::{predict_range, stabilization};
use crate::classify::{
    classify_basic, classify_refined, q_value, theorem_table, ClassifyOptions, Detail, Verdict,
};
use crate::error::{Error, Result};
use crate::maxprod::{
    closed_form_max, consecutive_threshold, max_product, max_product_bruteforce, ClosedForm,
    SupportHead,
};
use crate::model::{ExceptionSet, WeightFamily};
use crate::qseries::{coeffs_by_product, coeffs_by_recurrence, g_table, unit_table, Sign};

pub const SUITES: &[&str] = &[
    "oracles", "maxprod", "lemmas", "q-tables", "theorems", "figure1", "examples",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// First failing input, when there is one.
    pub counterexample: Option<String>,
}

impl Check {
    fn from_first_failure(name: impl Into<String>, failure: Option<String>) -> Self {
        Self {
            name: name.into(),
            passed: failure.is_none(),
            counterexample: failure,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// ℓ bound of the `figure1` suite.
    pub grid_ell_max: u32,
    pub jobs: Option<usize>,
    pub budget: Option<Duration>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid_ell_max: 300,
            jobs: None,
            budget: None,
        }
    }
}

/// Exception sets every suite iterates over.
pub fn battery() -> Vec<(String, ExceptionSet)> {
    let mut out: Vec<(String, ExceptionSet)> =
        ["none", "2", "3", "4", "2,4", "3,5", "powers:2", "powers:3"]
            .iter()
            .map(|s| (s.to_string(), s.parse().expect("battery spec")))
            .collect();
    for support in [&[1u64, 3][..], &[1, 3, 4]] {
        let e = ExceptionSet::with_finite_support(support).expect("battery support");
        out.push((format!("S={support:?}"), e));
    }
    out
}

pub fn verify_suite(id: &str) -> Result<SuiteReport> {
    verify_suite_with(id, &VerifyOptions::default())
}

pub fn verify_suite_with(id: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    let checks = match id {
        "oracles" => oracle_checks(),
        "maxprod" => maxprod_checks()?,
        "lemmas" => support_head_checks()?,
        "q-tables" => q_table_checks(),
        "theorems" => theorem_checks(opts)?,
        "figure1" => grid_checks(opts)?,
        "examples" => example_checks()?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport {
        suite: id.to_string(),
        checks,
    })
}

fn sweep_opts(opts: &VerifyOptions) -> SweepOptions {
    SweepOptions {
        jobs: opts.jobs,
        budget: opts.budget,
        ..SweepOptions::default()
    }
}

/// Coin-change count of partitions of `0..=n` into parts from `S`.
fn partition_counts(e: &ExceptionSet, n: usize) -> Vec<BigUint> {
    let mut counts = vec![BigUint::from(0u32); n + 1];
    counts[0] = BigUint::one();
    for part in (1..=n).filter(|&m| e.allows(m as u64)) {
        for s in part..=n {
            let add = counts[s - part].clone();
            counts[s] += add;
        }
    }
    counts
}

fn oracle_checks() -> Vec<Check> {
    let w = WeightFamily::power();
    let mut checks = Vec::new();
    for (label, e) in battery() {
        let failure = (1..=10).find_map(|ell| {
            let a = coeffs_by_recurrence(&e, &w, ell, 40).ok()?;
            let b = coeffs_by_product(&e, &w, ell, 40);
            (0..=40)
                .find(|&n| a.get(n) != b.get(n))
                .map(|n| format!("ℓ = {ell}, n = {n}: {} vs {}", a.get(n), b.get(n)))
        });
        checks.push(Check::from_first_failure(
            format!("recurrence = product [{label}]"),
            failure,
        ));

        let counts = partition_counts(&e, 25);
        let failure = match unit_table(&e, 25) {
            Ok(t) => (0..=25)
                .find(|&n| *t.get(n) != counts[n])
                .map(|n| format!("n = {n}: {} vs {}", t.get(n), counts[n])),
            Err(err) => Some(err.to_string()),
        };
        checks.push(Check::from_first_failure(
            format!("f ≡ 1 counts partitions [{label}]"),
            failure,
        ));
    }
    checks
}

fn maxprod_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (label, e) in battery() {
        let mut failure = None;
        for n in 0..=28 {
            let dp = max_product(&e, n);
            let brute = max_product_bruteforce(&e, n)?;
            if dp != brute {
                failure = Some(format!("n = {n}: dp {dp:?} vs brute force {brute:?}"));
                break;
            }
        }
        checks.push(Check::from_first_failure(
            format!("dp = brute force [{label}]"),
            failure,
        ));
    }
    Ok(checks)
}

/// Exception sets for the `a_2 = 2` subcases, keyed by a readable name.
pub fn two_subcases() -> Vec<(&'static str, ExceptionSet)> {
    [
        ("1,2,3 with 4 excluded", "4"),
        ("1,2,3,4", "none"),
        ("1,2,4 without 5", "3,5"),
        ("1,2,4,5", "3"),
        ("1,2,5", "3,4"),
        ("1,2,6", "3,4,5"),
    ]
    .iter()
    .map(|(name, spec)| (*name, spec.parse().expect("subcase spec")))
    .collect()
}

/// `E` with `S` starting `1, a2, a3`.
pub fn head_exceptions(a2: u64, a3: u64) -> ExceptionSet {
    ExceptionSet::from_atoms((2..a3).filter(|&m| m != a2)).expect("valid atoms")
}

fn closed_form_agrees(e: &ExceptionSet, ns: impl IntoIterator<Item = u64>) -> Option<String> {
    for n in ns {
        let head = SupportHead::from_exceptions(e, n.max(32));
        let dp = max_product(e, n);
        match closed_form_max(&head, n) {
            Ok(ClosedForm::Applicable(cf)) => {
                if cf.max != dp.max || cf.maximizers != dp.maximizers {
                    return Some(format!(
                        "n = {n}: closed form {} {:?} vs dp {} {:?}",
                        cf.max, cf.maximizers, dp.max, dp.maximizers
                    ));
                }
            }
            Ok(ClosedForm::NotApplicable(why)) => {
                return Some(format!("n = {n}: not applicable ({why})"))
            }
            Err(err) => return Some(format!("n = {n}: {err}")),
        }
    }
    None
}

fn support_head_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, e) in two_subcases() {
        checks.push(Check::from_first_failure(
            format!("a_2 = 2 closed form [{name}]"),
            closed_form_agrees(&e, 0..=60),
        ));
    }
    for a2 in [3u64, 4, 5] {
        for a3 in [2 * a2, 2 * a2 + 1] {
            let e = head_exceptions(a2, a3);
            checks.push(Check::from_first_failure(
                format!("wide gap closed form [a_2 = {a2}, a_3 = {a3}]"),
                closed_form_agrees(&e, 0..=60),
            ));
        }
        let e = head_exceptions(a2, a2 + 1);
        let t = consecutive_threshold(a2);
        checks.push(Check::from_first_failure(
            format!("consecutive closed form [a_2 = {a2}]"),
            closed_form_agrees(&e, t..=t + 3 * a2),
        ));
    }
    Ok(checks)
}

/// One displayed `Q_E` table: `values[n mod modulus]` for `n ≥ n_min`.
#[derive(Clone, Debug)]
pub struct QTable {
    pub name: String,
    pub exceptions: Vec<ExceptionSet>,
    pub modulus: u64,
    pub values: Vec<BigRational>,
    pub n_min: u64,
    pub n_max: u64,
}

fn frac(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn sets(specs: &[&str]) -> Vec<ExceptionSet> {
    specs
        .iter()
        .map(|s| s.parse().expect("table spec"))
        .collect()
}

pub fn q_tables() -> Vec<QTable> {
    let mut tables = vec![
        QTable {
            name: "1,2,3 ∈ S".into(),
            exceptions: sets(&["none", "4", "5", "4,5", "powers:5"]),
            modulus: 3,
            values: vec![frac(9, 8), frac(8, 9), frac(1, 1)],
            n_min: 4,
            n_max: 60,
        },
        QTable {
            name: "1,2,5 ∈ S, 3 ∈ E".into(),
            exceptions: sets(&["3", "3,4", "powers:3"]),
            modulus: 4,
            values: vec![frac(32, 25), frac(25, 32), frac(32, 25), frac(25, 32)],
            n_min: 5,
            n_max: 60,
        },
        QTable {
            name: "1,2 ∈ S, 3,5 ∈ E".into(),
            exceptions: sets(&["3,5", "3,4,5"]),
            modulus: 4,
            values: vec![frac(2, 1), frac(1, 2), frac(2, 1), frac(1, 2)],
            n_min: 4,
            n_max: 60,
        },
        QTable {
            name: "1,3,5 ∈ S, 2,4 ∈ E".into(),
            exceptions: sets(&["2,4", "powers:2"]),
            modulus: 3,
            values: vec![frac(9, 5), frac(3, 5), frac(25, 27)],
            n_min: 4,
            n_max: 60,
        },
        QTable {
            name: "1,3 ∈ S, 2,4,5 ∈ E".into(),
            exceptions: vec![
                "2,4,5".parse().expect("spec"),
                ExceptionSet::with_finite_support(&[1, 3]).expect("support"),
            ],
            modulus: 3,
            values: vec![frac(3, 1), frac(1, 1), frac(1, 3)],
            n_min: 4,
            n_max: 60,
        },
    ];
    for r in [3u64, 4, 5] {
        let mut values = vec![BigRational::one(); r as usize];
        values[0] = BigRational::new(
            BigInt::from(r).pow(r as u32 + 1),
            BigInt::from(r + 1).pow(r as u32),
        );
        values[r as usize - 1] = values[0].recip();
        let n_min = consecutive_threshold(r) + 2;
        tables.push(QTable {
            name: format!("1,{r},{} ∈ S, 2..{} ∈ E", r + 1, r - 1),
            exceptions: vec![head_exceptions(r, r + 1)],
            modulus: r,
            values,
            n_min,
            n_max: 60.max(n_min + 3 * r),
        });
    }
    tables
}

fn q_table_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    for table in q_tables() {
        for e in &table.exceptions {
            let failure = (table.n_min..=table.n_max).find_map(|n| {
                let got = q_value(e, n).q;
                let want = &table.values[(n % table.modulus) as usize];
                (got != *want).then(|| format!("n = {n}: Q = {got}, expected {want}"))
            });
            checks.push(Check::from_first_failure(
                format!("Q table [{}; E = {e}]", table.name),
                failure,
            ));
        }
    }
    checks
}

fn theorem_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let w = WeightFamily::power();
    let mut checks = Vec::new();

    for spec in ["3", "3,5"] {
        let e: ExceptionSet = spec.parse()?;
        let grid = sweep_with(&e, &w, 40, 120, &sweep_opts(opts))?;
        let rows = stabilization(&grid, &BTreeMap::new())?;
        let failure = rows.iter().filter(|r| r.n >= 5).find_map(|r| {
            let want = if r.n % 2 == 0 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            (!r.stabilized || r.terminal != want).then(|| {
                format!(
                    "n = {}: terminal {} from ℓ = {} (stabilized: {})",
                    r.n, r.terminal, r.ell_star, r.stabilized
                )
            })
        });
        checks.push(Check::from_first_failure(
            format!("parity law [E = {spec}]"),
            failure,
        ));
    }

    let e: ExceptionSet = "4".parse()?;
    let mut failure = None;
    for n in (5..=35).step_by(3) {
        let p = classify_refined(&e, n, &ClassifyOptions::default())?;
        let want = BigRational::new(BigInt::from(2 * (n + 1)), BigInt::from(n - 2));
        let ok = p.verdict == Verdict::EventuallyConcave
            && matches!(&p.detail, Detail::A(a) if a.ratio == want);
        if !ok {
            failure = Some(format!("n = {n}: {p:?}"));
            break;
        }
    }
    checks.push(Check::from_first_failure(
        "refined ratio 2(n+1)/(n−2) [E = 4]",
        failure,
    ));

    let grid = sweep_with(&e, &w, 35, 60, &sweep_opts(opts))?;
    let rows = stabilization(&grid, &BTreeMap::new())?;
    let failure = rows
        .iter()
        .filter(|r| r.n >= 5 && r.n % 3 == 2)
        .find(|r| !r.stabilized || r.terminal != Sign::Positive)
        .map(|r| {
            format!(
                "n = {}: terminal {} from ℓ = {}",
                r.n, r.terminal, r.ell_star
            )
        });
    checks.push(Check::from_first_failure(
        "refined verdict matches sweep [E = 4]",
        failure,
    ));

    for (label, e) in battery() {
        let grid = sweep_with(&e, &w, 30, 200, &sweep_opts(opts))?;
        let preds = predict_range(&e, grid.n_range(), &ClassifyOptions::default())?;
        let rows = stabilization(&grid, &preds)?;
        let failure = rows
            .iter()
            .find(|r| r.stabilized && r.agrees == Some(false))
            .map(|r| {
                format!(
                    "n = {}: predicted {:?}, terminal {}",
                    r.n, r.predicted, r.terminal
                )
            });
        checks.push(Check::from_first_failure(
            format!("predictions agree with sweep [{label}]"),
            failure,
        ));

        let failure = (1..=60).find_map(|n| {
            let table = theorem_table(&e, n).verdict;
            if !table.is_definite() {
                return None;
            }
            let basic = classify_basic(&e, n);
            let other = if basic.verdict.is_definite() {
                basic.verdict
            } else {
                classify_refined(&e, n, &ClassifyOptions::default())
                    .ok()?
                    .verdict
            };
            (other.is_definite() && other != table)
                .then(|| format!("n = {n}: table {table:?} vs criteria {other:?}"))
        });
        checks.push(Check::from_first_failure(
            format!("table agrees with criteria [{label}]"),
            failure,
        ));
    }
    Ok(checks)
}

fn grid_checks(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let e: ExceptionSet = "2,4".parse()?;
    let grid = sweep_with(
        &e,
        &WeightFamily::power(),
        50,
        opts.grid_ell_max,
        &sweep_opts(opts),
    )?;
    let rows = stabilization(&grid, &BTreeMap::new())?;
    let failure = rows.iter().filter(|r| r.n >= 4).find_map(|r| {
        let want = if r.n % 3 == 0 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        (!r.stabilized || r.terminal != want).then(|| {
            format!(
                "n = {}: terminal {} from ℓ = {}",
                r.n, r.terminal, r.ell_star
            )
        })
    });
    let nonpositive = grid
        .cells()
        .iter()
        .filter(|c| c.2 != Sign::Positive)
        .count();
    Ok(vec![Check::from_first_failure(
        format!(
            "E = 2,4: terminal sign +1 exactly for n ≡ 0 (mod 3), n ≥ 4 [ℓ ≤ {}, {nonpositive} cells with Δ ≤ 0]",
            opts.grid_ell_max
        ),
        failure,
    )])
}

/// `C(k + f, k)`.
pub fn binomial(top: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * (top - BigUint::from(k - i)) / BigUint::from(i);
    }
    acc
}

fn example_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let s13 = ExceptionSet::with_finite_support(&[1, 3])?;
    let w = WeightFamily::power();
    let mut failure = None;
    'outer: for ell in 1..=50 {
        let t = coeffs_by_recurrence(&s13, &w, ell, 62)?;
        let f3 = w.eval(ell, 3);
        for n in 1..=60 {
            if n % 3 == 1 && t.delta(n)?.sign != Sign::Zero {
                failure = Some(format!("ℓ = {ell}: Δ({n}) ≠ 0"));
                break 'outer;
            }
        }
        for k in 0..=20u64 {
            let want = binomial(&(&f3 + BigUint::from(k)), k);
            let i = 3 * k as usize;
            if (0..3).any(|j| *t.get(i + j) != want) {
                failure = Some(format!(
                    "ℓ = {ell}: p({i}..{}) differ from C({k} + f(3), {k})",
                    i + 2
                ));
                break 'outer;
            }
        }
    }
    checks.push(Check::from_first_failure(
        "S = {1,3} flat triples and zero Δ",
        failure,
    ));

    let w2 = WeightFamily::example2();
    let e = ExceptionSet::empty();
    let mut failure = None;
    'probe: for ell in 20..=40 {
        let t = coeffs_by_recurrence(&e, &w2, ell, 12)?;
        for n in [5usize, 8, 11] {
            let want = if ell % 2 == 0 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            let got = t.delta(n)?.sign;
            if got != want {
                failure = Some(format!("ℓ = {ell}, n = {n}: sign {got}, expected {want}"));
                break 'probe;
            }
        }
    }
    checks.push(Check::from_first_failure(
        "alternating weights flip the sign with ℓ",
        failure,
    ));

    for (label, e) in battery() {
        let failure = (1..=8).find_map(|ell| {
            let g = g_table(&e, &w, ell, 100);
            (1..=100)
                .find(|&n| g.fundamental_bounds_hold(n) != Some(true))
                .map(|n| format!("ℓ = {ell}, n = {n}: g = {}", g.get(n)))
        });
        checks.push(Check::from_first_failure(
            format!("g bounds [{label}]"),
            failure,
        ));
    }
    Ok(checks)
}

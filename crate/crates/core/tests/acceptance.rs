//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use eulerprod::classify::{classify_refined, q_value, ClassifyOptions, Detail, Verdict};
use eulerprod::harness::{stabilization, sweep, StabilizationRow};
use eulerprod::maxprod::{
    closed_form_max, consecutive_threshold, max_product, max_product_bruteforce, ClosedForm,
    SupportHead,
};
use eulerprod::qseries::{coeffs_by_product, coeffs_by_recurrence, g_table, Sign};
use eulerprod::{ExceptionSet, WeightFamily};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn set(spec: &str) -> ExceptionSet {
    spec.parse().unwrap()
}

fn support(s: &[u64]) -> ExceptionSet {
    ExceptionSet::with_finite_support(s).unwrap()
}

fn battery() -> Vec<(&'static str, ExceptionSet)> {
    vec![
        ("∅", set("none")),
        ("{2}", set("2")),
        ("{3}", set("3")),
        ("{4}", set("4")),
        ("{2,4}", set("2,4")),
        ("{3,5}", set("3,5")),
        ("powers:2", set("powers:2")),
        ("powers:3", set("powers:3")),
        ("S={1,3}", support(&[1, 3])),
        ("S={1,3,4}", support(&[1, 3, 4])),
    ]
}

fn frac(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rows_for(e: &ExceptionSet, n_max: u64, ell_max: u32) -> Vec<StabilizationRow> {
    let grid = sweep(e, &WeightFamily::power(), n_max, ell_max).unwrap();
    stabilization(&grid, &BTreeMap::new()).unwrap()
}

fn two_four_grid() -> Outcome {
    let e = set("2,4");
    let w = WeightFamily::power();

    let start = Instant::now();
    let reduced = sweep(&e, &w, 50, 60).map_err(|err| err.to_string())?;
    let reduced_secs = start.elapsed().as_secs_f64();

    let grid = sweep(&e, &w, 50, 300).map_err(|err| err.to_string())?;
    for ell in 1..=60 {
        ensure(reduced.row(ell) == grid.row(ell), || {
            format!("ℓ = {ell}: reduced grid differs")
        })?;
    }
    // Every cell again from the literal product expansion.
    for ell in 1..=300 {
        let t = coeffs_by_product(&e, &w, ell, 51);
        for n in 1..=50u64 {
            let (a, b, c) = (
                t.get(n as usize - 1),
                t.get(n as usize),
                t.get(n as usize + 1),
            );
            let want = Sign::of(&(BigInt::from(b * b) - BigInt::from(a * c)));
            ensure(grid.sign(n, ell) == Some(want), || {
                format!("ℓ = {ell}, n = {n}: sign mismatch")
            })?;
        }
    }
    let rows = stabilization(&grid, &BTreeMap::new()).unwrap();
    for r in rows.iter().filter(|r| r.n >= 4) {
        let want = if r.n % 3 == 0 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        ensure(r.stabilized && r.terminal == want, || {
            format!(
                "n = {}: terminal {} from ℓ = {}",
                r.n, r.terminal, r.ell_star
            )
        })?;
    }
    let cells = grid
        .cells()
        .iter()
        .filter(|c| c.2 != Sign::Positive)
        .count();
    let latest = rows.iter().map(|r| r.ell_star).max().unwrap();
    Ok(format!(
        "{cells} cells with Δ ≤ 0; latest ℓ* = {latest}; ℓ ≤ 60 gate in {reduced_secs:.2}s"
    ))
}

/// `C(top, k)` by the multiplicative formula.
fn choose(top: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (top - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

fn s13_identity() -> Outcome {
    let e = support(&[1, 3]);
    let w = WeightFamily::power();
    for ell in 1..=50u32 {
        let t = coeffs_by_recurrence(&e, &w, ell, 62).map_err(|err| err.to_string())?;
        let f3 = BigUint::from(3u32).pow(ell - 1);
        for k in 0..=20u64 {
            let want = choose(&(&f3 + BigUint::from(k)), k);
            for j in 0..3 {
                let n = (3 * k + j) as usize;
                ensure(*t.get(n) == want, || {
                    format!("ℓ = {ell}: p({n}) ≠ C({k} + 3^{}, {k})", ell - 1)
                })?;
            }
        }
        for n in (1..=60usize).filter(|n| n % 3 == 1) {
            let d = t.delta(n).unwrap();
            ensure(d.value.is_zero(), || {
                format!("ℓ = {ell}: Δ({n}) = {}", d.value)
            })?;
        }
    }
    Ok("Δ(n) = 0 for n ≡ 1 (mod 3) and flat binomial triples, ℓ ≤ 50".into())
}

fn parity_law() -> Outcome {
    let mut latest = 0;
    for spec in ["3", "3,5"] {
        for r in rows_for(&set(spec), 40, 120).iter().filter(|r| r.n >= 5) {
            let want = if r.n % 2 == 0 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            ensure(r.stabilized && r.terminal == want, || {
                format!(
                    "E = {{{spec}}}, n = {}: terminal {} from ℓ = {} (stabilized: {})",
                    r.n, r.terminal, r.ell_star, r.stabilized
                )
            })?;
            latest = latest.max(r.ell_star);
        }
    }
    Ok(format!(
        "E = {{3}} and {{3,5}}, 5 ≤ n ≤ 40; latest ℓ* = {latest}"
    ))
}

fn refined_four() -> Outcome {
    let e = set("4");
    for n in (5..=35u64).step_by(3) {
        let p =
            classify_refined(&e, n, &ClassifyOptions::default()).map_err(|err| err.to_string())?;
        ensure(p.verdict == Verdict::EventuallyConcave, || {
            format!("n = {n}: verdict {:?}", p.verdict)
        })?;
        let Detail::A(a) = &p.detail else {
            return Err(format!("n = {n}: no A-ratio in {:?}", p.detail));
        };
        let want = frac(2 * (n + 1), n - 2);
        ensure(a.ratio == want, || {
            format!("n = {n}: ratio {} ≠ {want}", a.ratio)
        })?;
    }
    let rows = rows_for(&e, 35, 200);
    let mut latest = 0;
    for r in rows.iter().filter(|r| r.n >= 5 && r.n % 3 == 2) {
        ensure(r.stabilized && r.terminal == Sign::Positive, || {
            format!(
                "n = {}: terminal {} from ℓ = {}",
                r.n, r.terminal, r.ell_star
            )
        })?;
        latest = latest.max(r.ell_star);
    }
    Ok(format!(
        "ratios 2(n+1)/(n−2) exact; sweep to ℓ = 200 settles on +1 by ℓ = {latest}"
    ))
}

/// Partitions of `n` into allowed parts not exceeding `max_part`, by recursion.
fn count_partitions(e: &ExceptionSet, n: u64, max_part: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max_part.min(n))
        .filter(|&m| e.allows(m))
        .map(|m| count_partitions(e, n - m, m))
        .sum()
}

fn oracle_equivalence() -> Outcome {
    let w = WeightFamily::power();
    for (label, e) in battery() {
        for ell in 1..=10 {
            let a = coeffs_by_recurrence(&e, &w, ell, 40).map_err(|err| err.to_string())?;
            let b = coeffs_by_product(&e, &w, ell, 40);
            ensure(a.coeffs() == b.coeffs(), || {
                format!("{label}, ℓ = {ell}: methods differ")
            })?;
        }
        let unit = coeffs_by_recurrence(&e, &w, 1, 25).map_err(|err| err.to_string())?;
        for n in 0..=25u64 {
            let want = BigUint::from(count_partitions(&e, n, n));
            ensure(*unit.get(n as usize) == want, || {
                format!("{label}: p({n}) ≠ {want}")
            })?;
        }
    }
    Ok("10 exception sets, ℓ ≤ 10, n ≤ 40; partition counts n ≤ 25".into())
}

/// Largest product over partitions of `n` into allowed parts, by recursion.
fn best_product(e: &ExceptionSet, n: u64, max_part: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max_part.min(n))
        .filter(|&m| e.allows(m))
        .map(|m| m * best_product(e, n - m, m))
        .max()
        .unwrap()
}

fn maxprod_agreement() -> Outcome {
    for (label, e) in battery() {
        for n in 0..=28u64 {
            let dp = max_product(&e, n);
            let brute = max_product_bruteforce(&e, n).map_err(|err| err.to_string())?;
            ensure(dp == brute, || {
                format!("{label}, n = {n}: {dp:?} vs {brute:?}")
            })?;
            ensure(dp.max == BigUint::from(best_product(&e, n, n)), || {
                format!("{label}, n = {n}: M = {}", dp.max)
            })?;
        }
    }
    Ok("M, maximizers, A and M̃ identical for n ≤ 28".into())
}

fn closed_forms() -> Outcome {
    let compare = |e: &ExceptionSet, n: u64| -> Result<(), String> {
        let head = SupportHead::from_exceptions(e, n.max(32));
        let dp = max_product(e, n);
        match closed_form_max(&head, n).map_err(|err| err.to_string())? {
            ClosedForm::Applicable(cf) => {
                ensure(cf.max == dp.max && cf.maximizers == dp.maximizers, || {
                    format!(
                        "E = {e}, n = {n}: closed form {:?} vs dp {:?}",
                        cf.maximizers, dp.maximizers
                    )
                })
            }
            ClosedForm::NotApplicable(why) => Err(format!("E = {e}, n = {n}: {why}")),
        }
    };
    let mut count = 0;
    for spec in ["4", "none", "3,5", "3", "3,4", "3,4,5"] {
        for n in 0..=60 {
            compare(&set(spec), n)?;
            count += 1;
        }
    }
    for a2 in [3u64, 4, 5] {
        for a3 in [2 * a2, 2 * a2 + 1, 3 * a2] {
            let e = ExceptionSet::from_atoms((2..a3).filter(|&m| m != a2)).unwrap();
            for n in 0..=60 {
                compare(&e, n)?;
                count += 1;
            }
        }
        let e = ExceptionSet::from_atoms(2..a2).unwrap();
        let t = consecutive_threshold(a2);
        for n in t..=t + 3 * a2 {
            compare(&e, n)?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} (support, n) pairs match the dynamic program"
    ))
}

fn q_tables() -> Outcome {
    let mut cases: Vec<(ExceptionSet, Vec<BigRational>, u64, u64)> = vec![
        (set("none"), vec![frac(9, 8), frac(8, 9), frac(1, 1)], 4, 60),
        (set("4"), vec![frac(9, 8), frac(8, 9), frac(1, 1)], 4, 60),
        (
            set("3"),
            vec![frac(32, 25), frac(25, 32), frac(32, 25), frac(25, 32)],
            5,
            60,
        ),
        (
            set("3,5"),
            vec![frac(2, 1), frac(1, 2), frac(2, 1), frac(1, 2)],
            4,
            60,
        ),
        (
            set("2,4"),
            vec![frac(9, 5), frac(3, 5), frac(25, 27)],
            4,
            60,
        ),
        (
            set("2,4,5"),
            vec![frac(3, 1), frac(1, 1), frac(1, 3)],
            4,
            60,
        ),
        (
            support(&[1, 3]),
            vec![frac(3, 1), frac(1, 1), frac(1, 3)],
            4,
            60,
        ),
    ];
    for r in [3u64, 4, 5] {
        let top = frac(r.pow(r as u32 + 1), (r + 1).pow(r as u32));
        let mut values = vec![frac(1, 1); r as usize];
        values[r as usize - 1] = top.recip();
        values[0] = top;
        let lo = consecutive_threshold(r) + 2;
        cases.push((
            ExceptionSet::from_atoms(2..r).unwrap(),
            values,
            lo,
            lo.max(60) + 3 * r,
        ));
    }
    let mut checked = 0;
    for (e, values, lo, hi) in &cases {
        for n in *lo..=*hi {
            let q = q_value(e, n).q;
            let want = &values[(n % values.len() as u64) as usize];
            ensure(q == *want, || {
                format!("E = {e}, n = {n}: Q = {q}, expected {want}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} values across {} configurations",
        cases.len()
    ))
}

fn example2_oscillation() -> Outcome {
    let w = WeightFamily::example2();
    let e = ExceptionSet::empty();
    let mut misses = Vec::new();
    for ell in 20..=40u32 {
        let t = coeffs_by_recurrence(&e, &w, ell, 12).map_err(|err| err.to_string())?;
        for n in [5usize, 8, 11] {
            let want = if ell % 2 == 0 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            let got = t.delta(n).unwrap().sign;
            if got != want {
                misses.push(format!("(n = {n}, ℓ = {ell}: {got})"));
            }
        }
    }
    if misses.is_empty() {
        Ok("63 probes alternate with the parity of ℓ".into())
    } else {
        Err(format!(
            "sign does not follow ℓ parity at {}",
            misses.join(", ")
        ))
    }
}

fn g_bounds() -> Outcome {
    let w = WeightFamily::power();
    for (label, e) in battery() {
        for ell in 1..=8u32 {
            let g = g_table(&e, &w, ell, 100);
            for n in 1..=100u64 {
                let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0 && e.allows(*d)).collect();
                let top = BigUint::from(*divisors.last().unwrap());
                let sigma1: u64 = divisors.iter().sum();
                let direct: BigUint = divisors.iter().map(|&d| BigUint::from(d).pow(ell)).sum();
                ensure(*g.get(n as usize) == direct, || {
                    format!("{label}, ℓ = {ell}: g({n}) wrong")
                })?;
                let lower = top.pow(ell);
                let upper = BigUint::from(sigma1) * top.pow(ell - 1);
                ensure(lower <= direct && direct <= upper, || {
                    format!("{label}, ℓ = {ell}, n = {n}: bounds fail")
                })?;
            }
        }
    }
    Ok("n_S^{Φ+1} ≤ g(n) ≤ σ_{E,1}(n)·n_S^Ψ for n ≤ 100, ℓ ≤ 8".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("E = {2,4} sign grid, n ≤ 50, ℓ ≤ 300", two_four_grid),
        (
            "S = {1,3} zero differences and binomial values",
            s13_identity,
        ),
        ("parity law for 3 ∈ E", parity_law),
        ("refined criterion for E = {4}", refined_four),
        (
            "recurrence, product and brute-force counts agree",
            oracle_equivalence,
        ),
        ("maximal-product DP matches brute force", maxprod_agreement),
        ("closed-form maximal products", closed_forms),
        ("displayed Q tables", q_tables),
        (
            "alternating weights flip the sign with ℓ",
            example2_oscillation,
        ),
        ("divisor-sum bounds", g_bounds),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("criterion {:>2} PASS  {title} ({secs:.1}s): {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

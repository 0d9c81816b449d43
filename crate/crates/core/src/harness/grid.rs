use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ExceptionSet, WeightFamily};
use crate::qseries::{coefficients, Method, Sign};

/// Identifies what a grid was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridContext {
    pub exceptions: String,
    pub weights: String,
    pub n_min: u64,
    pub n_max: u64,
    pub ell_min: u32,
    pub ell_max: u32,
}

/// Signs of `Δ_{E,ℓ}(n)` over a rectangle of `(n, ℓ)`.
///
/// Stored ℓ-major: `rows[i]` holds the signs for `ells[i]` and every `n` in
/// `n_min..=n_max`. A partial grid (budget exhausted) lacks some ℓ rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignGrid {
    pub exceptions: ExceptionSet,
    pub weights: WeightFamily,
    n_min: u64,
    n_max: u64,
    ell_range: RangeInclusive<u32>,
    ells: Vec<u32>,
    rows: Vec<Vec<Sign>>,
}

impl SignGrid {
    /// Builds a grid from precomputed rows; `rows[i]` belongs to `ells[i]`.
    pub fn from_rows(
        exceptions: ExceptionSet,
        weights: WeightFamily,
        ns: RangeInclusive<u64>,
        ell_range: RangeInclusive<u32>,
        mut rows: Vec<(u32, Vec<Sign>)>,
    ) -> Result<Self> {
        let width = (ns.end() - ns.start() + 1) as usize;
        rows.sort_by_key(|(ell, _)| *ell);
        rows.dedup_by_key(|(ell, _)| *ell);
        if let Some((ell, row)) = rows
            .iter()
            .find(|(ell, row)| row.len() != width || !ell_range.contains(ell))
        {
            return Err(Error::Contract(format!(
                "row ℓ = {ell} has {} entries, expected {width} within ℓ ∈ {ell_range:?}",
                row.len()
            )));
        }
        let (ells, rows) = rows.into_iter().unzip();
        Ok(Self {
            exceptions,
            weights,
            n_min: *ns.start(),
            n_max: *ns.end(),
            ell_range,
            ells,
            rows,
        })
    }

    pub fn context(&self) -> GridContext {
        GridContext {
            exceptions: self.exceptions.to_string(),
            weights: self.weights.id().to_string(),
            n_min: self.n_min,
            n_max: self.n_max,
            ell_min: *self.ell_range.start(),
            ell_max: *self.ell_range.end(),
        }
    }

    pub fn n_range(&self) -> RangeInclusive<u64> {
        self.n_min..=self.n_max
    }

    /// The requested ℓ range, whether or not every row was computed.
    pub fn ell_range(&self) -> RangeInclusive<u32> {
        self.ell_range.clone()
    }

    /// ℓ values actually present, ascending.
    pub fn ells(&self) -> &[u32] {
        &self.ells
    }

    pub fn is_complete(&self) -> bool {
        self.ells.len() == self.ell_range.clone().count()
    }

    pub fn row(&self, ell: u32) -> Option<&[Sign]> {
        let i = self.ells.binary_search(&ell).ok()?;
        Some(&self.rows[i])
    }

    pub fn sign(&self, n: u64, ell: u32) -> Option<Sign> {
        if n < self.n_min || n > self.n_max {
            return None;
        }
        self.row(ell).map(|r| r[(n - self.n_min) as usize])
    }

    /// Signs at fixed `n` for every present ℓ, ascending in ℓ.
    pub fn column(&self, n: u64) -> Vec<(u32, Sign)> {
        if n < self.n_min || n > self.n_max {
            return Vec::new();
        }
        let i = (n - self.n_min) as usize;
        self.ells
            .iter()
            .zip(&self.rows)
            .map(|(&ell, row)| (ell, row[i]))
            .collect()
    }

    /// Every cell, `n`-major then ℓ ascending.
    pub fn cells(&self) -> Vec<(u64, u32, Sign)> {
        self.n_range()
            .flat_map(|n| self.column(n).into_iter().map(move |(ell, s)| (n, ell, s)))
            .collect()
    }
}

type SignRow = (u32, Vec<Sign>);

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub n_min: u64,
    pub ell_min: u32,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub budget: Option<Duration>,
    pub method: Method,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            n_min: 1,
            ell_min: 1,
            jobs: None,
            budget: None,
            method: Method::Recurrence,
        }
    }
}

/// Signs of `Δ(n)` for `1 ≤ n ≤ n_max`, `1 ≤ ℓ ≤ ℓ_max`.
pub fn sweep(e: &ExceptionSet, w: &WeightFamily, n_max: u64, ell_max: u32) -> Result<SignGrid> {
    sweep_with(e, w, n_max, ell_max, &SweepOptions::default())
}

/// One coefficient table of horizon `n_max + 1` per ℓ, rows spread over
/// workers. An exhausted budget yields [`Error::BudgetExceeded`] carrying the
/// finished rows.
pub fn sweep_with(
    e: &ExceptionSet,
    w: &WeightFamily,
    n_max: u64,
    ell_max: u32,
    opts: &SweepOptions,
) -> Result<SignGrid> {
    if n_max < 2
        || ell_max < 1
        || opts.n_min < 1
        || opts.n_min > n_max
        || opts.ell_min < 1
        || opts.ell_min > ell_max
    {
        return Err(Error::Contract(format!(
            "sweep needs 1 ≤ n_min ≤ n_max with n_max ≥ 2 and 1 ≤ ℓ_min ≤ ℓ_max; got n ∈ {}..={n_max}, ℓ ∈ {}..={ell_max}",
            opts.n_min, opts.ell_min
        )));
    }
    let ells: Vec<u32> = (opts.ell_min..=ell_max).collect();
    let start = Instant::now();
    let deadline = opts.budget.map(|b| start + b);

    // `None` marks a row skipped after the deadline.
    let work = || -> Vec<Result<Option<SignRow>>> {
        ells.par_iter()
            .map(|&ell| {
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    return Ok(None);
                }
                sign_row(e, w, ell, opts.n_min, n_max, opts.method).map(|row| Some((ell, row)))
            })
            .collect()
    };
    let results = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|err| Error::Contract(format!("cannot start {jobs} workers: {err}")))?
            .install(work),
        None => work(),
    };

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        if let Some(row) = r? {
            rows.push(row);
        }
    }
    let completed = rows.len();
    let grid = SignGrid::from_rows(
        e.clone(),
        w.clone(),
        opts.n_min..=n_max,
        opts.ell_min..=ell_max,
        rows,
    )?;
    if completed < ells.len() {
        return Err(Error::BudgetExceeded {
            budget_secs: opts.budget.unwrap_or_default().as_secs_f64(),
            completed,
            requested: ells.len(),
            partial: Box::new(grid),
        });
    }
    Ok(grid)
}

/// Signs of `Δ_{E,ℓ}(n)` for `n_min ≤ n ≤ n_max` at a single ℓ.
pub fn sign_row(
    e: &ExceptionSet,
    w: &WeightFamily,
    ell: u32,
    n_min: u64,
    n_max: u64,
    method: Method,
) -> Result<Vec<Sign>> {
    let table = coefficients(e, w, ell, n_max as usize + 1, method)?;
    (n_min..=n_max)
        .map(|n| table.delta(n as usize).map(|d| d.sign))
        .collect()
}

/// Signs at one `n` for every ℓ in the range, each from its own table.
pub fn sign_column(
    e: &ExceptionSet,
    w: &WeightFamily,
    n: u64,
    ells: RangeInclusive<u32>,
) -> Result<Vec<(u32, Sign)>> {
    ells.map(|ell| {
        let table = coefficients(e, w, ell, n as usize + 1, Method::Recurrence)?;
        Ok((ell, table.delta(n as usize)?.sign))
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_partitions() {
        let g = sweep(&ExceptionSet::empty(), &WeightFamily::power(), 8, 1).unwrap();
        // 11² − 7·15 > 0.
        assert_eq!(g.sign(6, 1), Some(Sign::Positive));
        assert!(g.is_complete());
        assert_eq!(g.cells().len(), 8);
    }

    #[test]
    fn s13_zero_columns() {
        let e = ExceptionSet::with_finite_support(&[1, 3]).unwrap();
        let g = sweep(&e, &WeightFamily::power(), 30, 6).unwrap();
        for n in (1..=30).filter(|n| n % 3 == 1) {
            assert!(g.column(n).iter().all(|&(_, s)| s == Sign::Zero), "n={n}");
        }
    }

    #[test]
    fn column_matches_isolated_computation() {
        let e: ExceptionSet = "2,4".parse().unwrap();
        let w = WeightFamily::power();
        let g = sweep(&e, &w, 20, 12).unwrap();
        for n in [2, 7, 13, 20] {
            assert_eq!(g.column(n), sign_column(&e, &w, n, 1..=12).unwrap());
        }
    }

    #[test]
    fn jobs_do_not_change_result() {
        let e: ExceptionSet = "3".parse().unwrap();
        let w = WeightFamily::power();
        let serial = sweep_with(
            &e,
            &w,
            15,
            10,
            &SweepOptions {
                jobs: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let wide = sweep_with(
            &e,
            &w,
            15,
            10,
            &SweepOptions {
                jobs: Some(4),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(serial, wide);
    }

    #[test]
    fn zero_budget_returns_partial() {
        let opts = SweepOptions {
            budget: Some(Duration::ZERO),
            ..Default::default()
        };
        match sweep_with(&ExceptionSet::empty(), &WeightFamily::power(), 10, 5, &opts) {
            Err(Error::BudgetExceeded {
                completed,
                requested,
                partial,
                ..
            }) => {
                assert_eq!(requested, 5);
                assert_eq!(partial.ells().len(), completed);
                assert!(!partial.is_complete());
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(sweep(&ExceptionSet::empty(), &WeightFamily::power(), 1, 5).is_err());
        assert!(sweep(&ExceptionSet::empty(), &WeightFamily::power(), 5, 0).is_err());
    }
}

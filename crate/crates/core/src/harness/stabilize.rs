use std::collections::BTreeMap;

use serde::Serialize;

use super::grid::SignGrid;
use crate::classify::{classify, ClassifyOptions, Prediction, Verdict};
use crate::error::{Error, Result};
use crate::model::ExceptionSet;
use crate::qseries::Sign;

/// Observed behaviour of one `n` across the ℓ rows of a grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationRow {
    pub n: u64,
    pub predicted: Option<Verdict>,
    pub terminal: Sign,
    /// Least ℓ with the sign constant on `[ℓ*, ℓ_max]`.
    pub ell_star: u32,
    pub ell_max: u32,
    /// `ℓ*` lies in the lower half of the swept range, so the terminal sign
    /// held for at least half of it.
    pub stabilized: bool,
    /// Terminal sign matches a definite prediction; `None` when not applicable.
    pub agrees: Option<bool>,
}

/// `(terminal sign, ℓ*)` of a column ordered by ascending ℓ.
pub fn terminal_run(column: &[(u32, Sign)]) -> Option<(Sign, u32)> {
    let &(_, terminal) = column.last()?;
    let start = column
        .iter()
        .rev()
        .take_while(|&&(_, s)| s == terminal)
        .last()
        .map(|&(ell, _)| ell)?;
    Some((terminal, start))
}

/// Per-`n` stabilization summary. `predictions` may omit any `n`; such rows
/// are not applicable.
pub fn stabilization(
    grid: &SignGrid,
    predictions: &BTreeMap<u64, Prediction>,
) -> Result<Vec<StabilizationRow>> {
    if !grid.is_complete() {
        return Err(Error::Contract(
            "stabilization needs a complete grid".into(),
        ));
    }
    let range = grid.ell_range();
    let (ell_min, ell_max) = (*range.start(), *range.end());
    let half = ell_min + (ell_max - ell_min) / 2;

    grid.n_range()
        .map(|n| {
            let column = grid.column(n);
            let (terminal, ell_star) = terminal_run(&column).expect("complete grid has rows");
            let predicted = predictions.get(&n).map(|p| p.verdict);
            let agrees = predicted
                .and_then(Verdict::expected_sign)
                .map(|expected| expected == terminal);
            Ok(StabilizationRow {
                n,
                predicted,
                terminal,
                ell_star,
                ell_max,
                stabilized: ell_star <= half,
                agrees,
            })
        })
        .collect()
}

/// Runs the classifier pipeline for every `n` in the range.
pub fn predict_range(
    e: &ExceptionSet,
    ns: impl IntoIterator<Item = u64>,
    opts: &ClassifyOptions,
) -> Result<BTreeMap<u64, Prediction>> {
    ns.into_iter()
        .map(|n| Ok((n, classify(e, n, opts)?)))
        .collect()
}

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::grid::{GridContext, SignGrid};
use crate::error::{Error, Result};
use crate::qseries::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFormat {
    Csv,
    Json,
    Pbm,
}

impl FromStr for GridFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "pbm" => Ok(Self::Pbm),
            other => Err(Error::parse("grid format", s, other)),
        }
    }
}

#[derive(Serialize)]
struct JsonGrid<'a> {
    context: GridContext,
    complete: bool,
    n: Vec<u64>,
    ell: &'a [u32],
    /// `signs[i][j]` is the sign at `n[i]`, `ell[j]`.
    signs: Vec<Vec<i8>>,
}

pub fn render_grid(grid: &SignGrid, format: GridFormat) -> String {
    match format {
        GridFormat::Csv => render_csv(grid),
        GridFormat::Json => render_json(grid),
        GridFormat::Pbm => render_pbm(grid),
    }
}

fn render_csv(grid: &SignGrid) -> String {
    let mut out = String::from("n,ell,sign\n");
    for (n, ell, s) in grid.cells() {
        writeln!(out, "{n},{ell},{}", s.as_i8()).unwrap();
    }
    out
}

fn render_json(grid: &SignGrid) -> String {
    let doc = JsonGrid {
        context: grid.context(),
        complete: grid.is_complete(),
        n: grid.n_range().collect(),
        ell: grid.ells(),
        signs: grid
            .n_range()
            .map(|n| grid.column(n).into_iter().map(|(_, s)| s.as_i8()).collect())
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("grid serializes");
    out.push('\n');
    out
}

/// Plain P1 bitmap: one row per ℓ (ascending, top to bottom), one column per
/// `n` (ascending), pixel 1 where `Δ ≤ 0`.
fn render_pbm(grid: &SignGrid) -> String {
    let ctx = grid.context();
    let width = grid.n_range().count();
    let mut out = String::from("P1\n");
    writeln!(
        out,
        "# E={} weights={} n={}..{} ell={}..{} rows=ell cols=n",
        ctx.exceptions, ctx.weights, ctx.n_min, ctx.n_max, ctx.ell_min, ctx.ell_max
    )
    .unwrap();
    writeln!(out, "{width} {}", grid.ells().len()).unwrap();
    for &ell in grid.ells() {
        let row = grid.row(ell).expect("present row");
        let line: Vec<&str> = row
            .iter()
            .map(|&s| if s == Sign::Positive { "0" } else { "1" })
            .collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn emit_grid(grid: &SignGrid, path: &Path, format: GridFormat) -> Result<()> {
    std::fs::write(path, render_grid(grid, format)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads the `n,ell,sign` CSV back into cells in file order.
pub fn parse_csv(text: &str) -> Result<Vec<(u64, u32, Sign)>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("n,ell,sign") => {}
        other => return Err(Error::parse("grid csv header", text, other.unwrap_or(""))),
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let bad = || Error::parse("grid csv row", line, line);
            let mut fields = line.split(',');
            let n = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
            let ell = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
            let sign = fields
                .next()
                .and_then(|f| f.parse::<i8>().ok())
                .and_then(Sign::from_i8)
                .ok_or_else(bad)?;
            if fields.next().is_some() {
                return Err(bad());
            }
            Ok((n, ell, sign))
        })
        .collect()
}

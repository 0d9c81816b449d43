use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use eulerprod::classify::{classify, ClassifyOptions, DeltaProbe};
use eulerprod::harness::{
    predict_range, render_grid, stabilization, sweep_with, verify_suite_with, GridFormat,
    SuiteReport, SweepOptions, VerifyOptions, SUITES,
};
use eulerprod::maxprod::{
    closed_form_max, max_product, max_product_bruteforce, ClosedForm, SupportHead,
};
use eulerprod::qseries::{coefficients, Method};
use eulerprod::{Error, ExceptionSet, WeightFamily};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Exact coefficients, Turán signs and maximal products for restricted
/// Euler products.
#[derive(Parser)]
#[command(name = "eulerprod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients p(n) with Δ(n) and its sign for 0 ≤ n ≤ N.
    Compute(ComputeArgs),
    /// Δ(n) = p(n)² − p(n−1)p(n+1) at a single n.
    Delta(DeltaArgs),
    /// Maximal product of parts from S, its maximizers and A(n).
    Maxprod(MaxprodArgs),
    /// Predicted eventual sign of Δ(n) as ℓ grows.
    Classify(ClassifyArgs),
    /// Sign grid over 1 ≤ n ≤ N, 1 ≤ ℓ ≤ L.
    Sweep(SweepArgs),
    /// Run a built-in verification suite, or `all`.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Family {
    /// Exception set, e.g. `2,4`, `powers:2`, `3+multiples:5`, `2+from:4`.
    #[arg(long, default_value = "none")]
    exceptions: String,
    /// Weight family: power, example1, example2 or custom:<file.json>.
    #[arg(long, default_value = "power")]
    weights: String,
}

impl Family {
    fn exceptions(&self) -> Result<ExceptionSet> {
        Ok(self.exceptions.parse()?)
    }

    fn weights(&self) -> Result<WeightFamily> {
        Ok(WeightFamily::from_spec(&self.weights)?)
    }
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long)]
    ell: u32,
    #[arg(long)]
    n_max: u64,
    /// recurrence or product.
    #[arg(long, default_value = "recurrence")]
    method: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DeltaArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long)]
    ell: u32,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value = "recurrence")]
    method: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MaxprodArgs {
    #[arg(long, default_value = "none")]
    exceptions: String,
    #[arg(long)]
    n: u64,
    /// Exhaustive enumeration instead of dynamic programming.
    #[arg(long, conflicts_with = "closed_form")]
    enumerate: bool,
    /// Closed form for a support head such as `1,3,4,...`.
    #[arg(long)]
    closed_form: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long)]
    n: u64,
    /// ℓ range `a..b` for probing 2g(4)/g(2)².
    #[arg(long)]
    probe_ell: Option<String>,
    /// Values below n−1 on which growth of M is also checked.
    #[arg(long, default_value_t = 5)]
    guard: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Budget {
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Wall-clock limit; partial results are kept and the exit code is 3.
    #[arg(long)]
    budget_seconds: Option<f64>,
}

impl Budget {
    fn duration(&self) -> Result<Option<Duration>> {
        self.budget_seconds
            .map(|s| {
                Duration::try_from_secs_f64(s).map_err(|_| usage(format!("invalid budget {s}")))
            })
            .transpose()
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long)]
    n_max: u64,
    #[arg(long, default_value_t = 300)]
    ell_max: u32,
    /// Print per-n stabilization rows to stdout as JSON.
    #[arg(long)]
    stabilization: bool,
    #[command(flatten)]
    budget: Budget,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of the suite ids, or `all`.
    suite: String,
    /// ℓ bound of the figure1 suite.
    #[arg(long, default_value_t = 300)]
    ell_max: u32,
    #[command(flatten)]
    budget: Budget,
    #[command(flatten)]
    output: Output,
}

/// A usage problem detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

/// Signals that a verification ran and failed.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        Some(
            Error::Parse { .. }
            | Error::InvalidExceptions(_)
            | Error::InvalidWeights(_)
            | Error::InvalidHead(_)
            | Error::Contract(_)
            | Error::UnknownSuite(_)
            | Error::OutOfRange { .. }
            | Error::TooLarge { .. },
        ) => EXIT_USAGE,
        _ => EXIT_VERIFY,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => compute(args),
        Command::Delta(args) => delta(args),
        Command::Maxprod(args) => maxprod(args),
        Command::Classify(args) => classify_cmd(args),
        Command::Sweep(args) => sweep_cmd(args),
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if err.downcast_ref::<VerificationFailed>().is_none() {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}

fn write_output(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => write_file(path, text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

/// Resolves `--format` against the formats a command accepts; the first is
/// the default.
fn pick_format<'a>(output: &Output, allowed: &[&'a str]) -> Result<&'a str> {
    match &output.format {
        None => Ok(allowed[0]),
        Some(f) => allowed
            .iter()
            .find(|a| **a == f.as_str())
            .copied()
            .ok_or_else(|| usage(format!("--format {f} is not one of {}", allowed.join(", ")))),
    }
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn compute(args: ComputeArgs) -> Result<()> {
    let format = pick_format(&args.output, &["csv", "json"])?;
    let e = args.family.exceptions()?;
    let w = args.family.weights()?;
    let method: Method = args.method.parse()?;
    let horizon = args.n_max as usize;
    let table = coefficients(&e, &w, args.ell, horizon + 1, method)?;

    // (n, p(n), Δ(n) with its sign where defined)
    type Row = (usize, String, Option<(String, i8)>);
    let rows: Vec<Row> = (0..=horizon)
        .map(|n| {
            let d = (n >= 1).then(|| table.delta(n)).transpose()?;
            Ok((
                n,
                table.get(n).to_string(),
                d.map(|d| (d.value.to_string(), d.sign.as_i8())),
            ))
        })
        .collect::<Result<_>>()?;

    let text = if format == "csv" {
        let mut out = String::from("n,p,delta,sign\n");
        for (n, p, d) in &rows {
            match d {
                Some((value, sign)) => writeln!(out, "{n},{p},{value},{sign}")?,
                None => writeln!(out, "{n},{p},,")?,
            }
        }
        out
    } else {
        let rows: Vec<_> = rows
            .iter()
            .map(|(n, p, d)| {
                json!({
                    "n": n,
                    "p": p,
                    "delta": d.as_ref().map(|d| d.0.clone()),
                    "sign": d.as_ref().map(|d| d.1),
                })
            })
            .collect();
        pretty(&json!({
            "context": {
                "exceptions": e.to_string(),
                "weights": w.id(),
                "ell": args.ell,
                "method": method,
            },
            "rows": rows,
        }))?
    };
    write_output(&args.output, &text)
}

fn delta(args: DeltaArgs) -> Result<()> {
    let format = pick_format(&args.output, &["text", "json"])?;
    let e = args.family.exceptions()?;
    let w = args.family.weights()?;
    let method: Method = args.method.parse()?;
    if args.n < 1 {
        return Err(usage("Δ(n) needs n ≥ 1"));
    }
    let table = coefficients(&e, &w, args.ell, args.n as usize + 1, method)?;
    let d = table.delta(args.n as usize)?;
    let text = if format == "text" {
        format!("{}\nsign {}\n", d.value, d.sign)
    } else {
        pretty(&json!({
            "exceptions": e.to_string(),
            "weights": w.id(),
            "ell": args.ell,
            "n": args.n,
            "delta": d.value.to_string(),
            "sign": d.sign,
        }))?
    };
    write_output(&args.output, &text)
}

fn maxprod(args: MaxprodArgs) -> Result<()> {
    let format = pick_format(&args.output, &["text", "json"])?;
    if let Some(head) = &args.closed_form {
        let head: SupportHead = head.parse()?;
        let text = match closed_form_max(&head, args.n)? {
            ClosedForm::Applicable(r) => {
                if format == "json" {
                    pretty(&json!({ "head": head.to_string(), "applicable": true, "report": r }))?
                } else {
                    let parts: Vec<String> = r.maximizers.iter().map(ToString::to_string).collect();
                    format!(
                        "M = {}\nmaximizers {}\ncase {:?}\n",
                        r.max,
                        parts.join(" "),
                        r.case
                    )
                }
            }
            ClosedForm::NotApplicable(why) => {
                if format == "json" {
                    pretty(
                        &json!({ "head": head.to_string(), "applicable": false, "reason": why }),
                    )?
                } else {
                    format!("not applicable: {why}\n")
                }
            }
        };
        return write_output(&args.output, &text);
    }

    let e: ExceptionSet = args.exceptions.parse()?;
    let report = if args.enumerate {
        max_product_bruteforce(&e, args.n)?
    } else {
        max_product(&e, args.n)
    };
    let text = if format == "json" {
        pretty(&report)?
    } else {
        let parts: Vec<String> = report.maximizers.iter().map(ToString::to_string).collect();
        let second = report
            .second
            .as_ref()
            .map_or("none".to_string(), ToString::to_string);
        format!(
            "M = {}\nmaximizers {}\nA = {}\nM~ = {second}\n",
            report.max,
            parts.join(" "),
            report.a
        )
    };
    write_output(&args.output, &text)
}

fn parse_range(spec: &str) -> Result<RangeInclusive<u32>> {
    let bad = || usage(format!("ℓ range {spec:?} must look like a..b"));
    let (a, b) = spec.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b
        .trim_start_matches('=')
        .trim()
        .parse()
        .map_err(|_| bad())?;
    if a < 1 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn classify_cmd(args: ClassifyArgs) -> Result<()> {
    let format = pick_format(&args.output, &["text", "json"])?;
    let e = args.family.exceptions()?;
    if args.n < 1 {
        return Err(usage("classification needs n ≥ 1"));
    }
    let probe = args
        .probe_ell
        .as_deref()
        .map(|spec| -> Result<DeltaProbe> {
            Ok(DeltaProbe {
                weights: args.family.weights()?,
                ells: parse_range(spec)?,
            })
        })
        .transpose()?;
    let opts = ClassifyOptions {
        guard: args.guard,
        probe,
    };
    let p = classify(&e, args.n, &opts)?;
    let text = if format == "json" {
        pretty(&json!({ "exceptions": e.to_string(), "n": args.n, "prediction": p }))?
    } else {
        let verdict = serde_json::to_value(p.verdict)?;
        let mechanism = serde_json::to_value(p.mechanism)?;
        format!(
            "{}\nmechanism {}\n",
            verdict.as_str().unwrap_or_default(),
            mechanism.as_str().unwrap_or_default()
        )
    };
    write_output(&args.output, &text)
}

fn sweep_cmd(args: SweepArgs) -> Result<()> {
    let format: GridFormat = pick_format(&args.output, &["csv", "json", "pbm"])?.parse()?;
    let e = args.family.exceptions()?;
    let w = args.family.weights()?;
    let opts = SweepOptions {
        jobs: args.budget.jobs,
        budget: args.budget.duration()?,
        ..SweepOptions::default()
    };
    let grid = match sweep_with(&e, &w, args.n_max, args.ell_max, &opts) {
        Ok(grid) => grid,
        Err(Error::BudgetExceeded {
            budget_secs,
            completed,
            requested,
            partial,
        }) => {
            // Keep what finished, then report the overrun.
            if let Some(path) = &args.output.out {
                write_file(path, &render_grid(&partial, format))?;
            }
            return Err(Error::BudgetExceeded {
                budget_secs,
                completed,
                requested,
                partial,
            }
            .into());
        }
        Err(err) => return Err(err.into()),
    };

    let rendered = render_grid(&grid, format);
    if args.stabilization {
        let preds = predict_range(&e, grid.n_range(), &ClassifyOptions::default())?;
        let rows = stabilization(&grid, &preds)?;
        let out = args
            .output
            .out
            .as_ref()
            .ok_or_else(|| usage("--stabilization needs --out for the grid"))?;
        write_file(out, &rendered)?;
        std::io::stdout().write_all(pretty(&rows)?.as_bytes())?;
        return Ok(());
    }
    write_output(&args.output, &rendered)
}

fn verify(args: VerifyArgs) -> Result<()> {
    let format = pick_format(&args.output, &["text", "json"])?;
    let opts = VerifyOptions {
        grid_ell_max: args.ell_max,
        jobs: args.budget.jobs,
        budget: args.budget.duration()?,
    };
    let ids: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let reports: Vec<SuiteReport> = ids
        .iter()
        .map(|id| verify_suite_with(id, &opts))
        .collect::<Result<_, _>>()
        .with_context(|| format!("running suite {}", args.suite))?;

    let text = if format == "json" {
        pretty(&reports)?
    } else {
        let mut out = String::new();
        for report in &reports {
            for check in &report.checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {}: {}", report.suite, check.name)?;
                if let Some(ce) = &check.counterexample {
                    writeln!(out, "     {ce}")?;
                }
            }
        }
        out
    };
    write_output(&args.output, &text)?;
    if reports.iter().all(SuiteReport::passed) {
        Ok(())
    } else {
        bail!(VerificationFailed)
    }
}

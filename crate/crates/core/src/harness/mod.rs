//! Sign sweeps over `(n, ℓ)`, stabilization analysis, grid output and the
//! built-in verification suites.

mod emit;
mod grid;
mod stabilize;
mod verify;

pub use emit::{emit_grid, parse_csv, render_grid, GridFormat};
pub use grid::{sign_column, sign_row, sweep, sweep_with, GridContext, SignGrid, SweepOptions};
pub use stabilize::{predict_range, stabilization, terminal_run, StabilizationRow};
pub use verify::{
    battery, binomial, head_exceptions, q_tables, two_subcases, verify_suite, verify_suite_with,
    Check, QTable, SuiteReport, VerifyOptions, SUITES,
};

//! Case descriptions, the built-in experiment registry, and report output.

pub mod cases;
pub mod config;
pub mod report;

pub use cases::{
    builtin, builtin_toml, prepare, run_case, run_prepared, CaseResult, Exact, PreparedCase, BUILTIN_CASES,
};
pub use config::CaseConfig;
pub use report::{
    convergence_study, knudsen_sweep, l2_error, ConvergenceReport, ConvergenceRow, Emit, Format, KnudsenReport,
    KnudsenRow,
};

//! Benchmark harness: simulated suites, progress curves, aggregate reports.

mod plot;
mod progress;
mod suite;

pub use plot::progress_svg;
pub use progress::{average_curves, progress_normalize, ProgressCurve, RunCurve};
pub use suite::{
    median, report_csv, run_glm, run_linear, run_suite, write_report, Aggregate, Algorithm, AlgorithmSummary,
    LambdaChoice, PairwiseSummary, SolverSettings, KKT_TOL, SuiteConfig, SuiteReport, SuiteRow,
};

//! Verification suites behind the `rankone-ps verify` command.
//!
//! A suite expands into independent cases, each comparing a computed value
//! against an independent oracle. Reports list cases in a fixed order, so
//! two runs with the same config produce identical case data regardless of
//! thread count.

pub mod config;
pub mod report;
mod suites;

pub use config::{AtomSpec, CutoffSpec, InversionSpec, SuiteConfig, SuiteName, SymbolName, SymbolSpec, Tolerances};
pub use report::{emit_report, CaseRecord, Criterion, ReportFormat, Summary, Timing, VerificationReport, CSV_COLUMNS, SCHEMA_VERSION};

use crate::error::{Error, Result};
use rayon::prelude::*;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; overrides the config. `None` uses the config value,
    /// then rayon's default.
    pub parallelism: Option<usize>,
    /// Attach wall-clock metadata to the report.
    pub timestamp: bool,
}

/// Runs every case of `config.suite` and collects the report.
pub fn run_suite(config: &SuiteConfig, opts: &RunOptions) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let cases = suites::build_cases(config)?;
    let threads = opts.parallelism.or(config.parallelism).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let records = pool.install(|| cases.par_iter().map(|c| suites::evaluate(config.suite, c)).collect::<Vec<_>>());
    let mut report = VerificationReport::new(config, records);
    if opts.timestamp {
        let unix_time = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        report.timing = Some(Timing { unix_time, wall_time_s: start.elapsed().as_secs_f64() });
    }
    Ok(report)
}

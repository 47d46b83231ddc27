//! Verification reports and their JSON/CSV encodings.

use super::config::{SuiteConfig, SuiteName};
use crate::error::{Error, Result};
use crate::group::Model;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

pub const SCHEMA_VERSION: u32 = 1;

/// How `tol` is applied to a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// `rel_err <= tol`
    Relative,
    /// `abs_err <= tol`
    Absolute,
    /// `Re lhs <= Re rhs + tol`
    AtMost,
    /// Pass/fail decided by the check itself (e.g. an expected error).
    Flag,
}

/// One row of a report. Numeric fields are `None` when the case could not
/// be evaluated; `note` then carries the error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub suite: String,
    pub case: String,
    pub params: BTreeMap<String, Value>,
    pub lhs_re: Option<f64>,
    pub lhs_im: Option<f64>,
    pub rhs_re: Option<f64>,
    pub rhs_im: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tol: f64,
    pub criterion: Criterion,
    pub pass: bool,
    /// Rate-study columns (msp-rate only).
    pub lambda: Option<f64>,
    pub ratio: Option<f64>,
    pub abs_dev: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_rel_err: Option<f64>,
    pub pass: bool,
}

impl Summary {
    pub fn of(cases: &[CaseRecord]) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        let max_rel_err = cases
            .iter()
            .filter(|c| c.criterion == Criterion::Relative)
            .filter_map(|c| c.rel_err)
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        Summary { total: cases.len(), passed, failed: cases.len() - passed, max_rel_err, pass: passed == cases.len() }
    }
}

/// Run metadata that differs between otherwise identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub unix_time: u64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: SuiteName,
    pub model: Model,
    pub summary: Summary,
    pub cases: Vec<CaseRecord>,
    pub config_echo: SuiteConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl VerificationReport {
    pub fn new(config: &SuiteConfig, cases: Vec<CaseRecord>) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: config.suite,
            model: config.model,
            summary: Summary::of(&cases),
            cases,
            config_echo: config.clone(),
            timing: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::invalid(format!("report serialization failed: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("report parse failed: {e}")))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::invalid(format!("csv encoding failed: {e}"));
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        for c in &self.cases {
            let params = serde_json::to_string(&c.params).map_err(|e| Error::invalid(e.to_string()))?;
            w.write_record([
                c.suite.clone(),
                c.case.clone(),
                params,
                opt(c.lhs_re),
                opt(c.lhs_im),
                opt(c.rhs_re),
                opt(c.rhs_im),
                opt(c.abs_err),
                opt(c.rel_err),
                c.tol.to_string(),
                serde_json::to_value(c.criterion).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                c.pass.to_string(),
                opt(c.lambda),
                opt(c.ratio),
                opt(c.abs_dev),
                c.note.clone().unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
    }
}

pub const CSV_COLUMNS: [&str; 16] = [
    "suite",
    "case",
    "params",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_err",
    "rel_err",
    "tol",
    "criterion",
    "pass",
    "lambda",
    "ratio",
    "abs_dev",
    "note",
];

// `f64::to_string` is the shortest representation that parses back exactly.
fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Config(format!("unknown report format `{s}`, valid formats: json, csv"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &VerificationReport, format: ReportFormat, path: Option<&Path>) -> Result<()> {
    let mut text = match format {
        ReportFormat::Json => report.to_json()?,
        ReportFormat::Csv => report.to_csv()?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io { path: p.display().to_string(), message: e.to_string() }),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| Error::Io { path: "<stdout>".into(), message: e.to_string() }),
    }
}

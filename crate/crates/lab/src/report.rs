//! CSV tables, pass/fail checks and the JSON summary written next to them.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{Experiment, ExperimentConfig};
use crate::LabResult;

pub const CSV_SCHEMA: &str = "# schema=1";

/// Full-precision float formatting used in every table.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.17e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    /// File name, e.g. `teuwen.csv`.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{CSV_SCHEMA}");
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

/// A named assertion with the measured value and its threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    /// Passes when `value <= threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value <= threshold, value, threshold }
    }

    /// Passes when `value >= threshold`.
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value >= threshold, value, threshold }
    }

    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        let v = if passed { 1.0 } else { 0.0 };
        Self { name: name.into(), passed, value: v, threshold: 1.0 }
    }
}

/// What an experiment produced.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub summary: serde_json::Value,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub experiment: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config: &'a ExperimentConfig,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub elapsed_seconds: f64,
    pub passed: bool,
    pub exit_code: i32,
    pub error: Option<String>,
    pub checks: &'a [Check],
    pub tables: Vec<&'a str>,
    pub summary: &'a serde_json::Value,
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Writes `report.json`, every table, and `fixtures.json` into `dir`.
#[allow(clippy::too_many_arguments)]
pub fn write_outputs(
    dir: &Path,
    experiment: Experiment,
    config: &ExperimentConfig,
    outcome: &Outcome,
    started: f64,
    exit_code: i32,
    error: Option<String>,
) -> LabResult<()> {
    std::fs::create_dir_all(dir)?;
    for t in &outcome.tables {
        std::fs::write(dir.join(&t.name), t.to_csv())?;
    }
    let fixtures = invgauss::oracles::oracle_fixtures()?;
    std::fs::write(dir.join("fixtures.json"), serde_json::to_string_pretty(&fixtures).expect("serializable"))?;
    let finished = unix_now();
    let report = Report {
        experiment: experiment.id(),
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        config,
        started_unix: started,
        finished_unix: finished,
        elapsed_seconds: finished - started,
        passed: error.is_none() && outcome.passed(),
        exit_code,
        error,
        checks: &outcome.checks,
        tables: outcome.tables.iter().map(|t| t.name.as_str()).collect(),
        summary: &outcome.summary,
    };
    std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report).expect("serializable"))?;
    Ok(())
}

//! Assertion records, convergence tables and their serialization.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::config::{Config, Format};

/// One checked assertion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub suite: String,
    /// Short machine-friendly name of the check.
    pub check: String,
    /// The property the check verifies.
    pub paper_ref: String,
    /// Human-readable form of the asserted bound.
    pub bound: String,
    pub worst_observed: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
}

/// How `worst_observed` compares with `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    /// Pass when `worst ≤ tolerance`.
    AtMost,
    /// Pass when `worst ≥ tolerance`.
    AtLeast,
}

impl Record {
    /// A record whose pass flag is decided by comparing `worst` with
    /// `tolerance`. NaN never passes.
    pub fn new(suite: &str, check: &str, paper_ref: &str, bound: &str, worst: f64, tolerance: f64, sense: Sense, samples: usize) -> Record {
        let pass = match sense {
            Sense::AtMost => worst <= tolerance,
            Sense::AtLeast => worst >= tolerance,
        };
        Record {
            suite: suite.into(),
            check: check.into(),
            paper_ref: paper_ref.into(),
            bound: bound.into(),
            worst_observed: worst,
            tolerance,
            samples,
            pass,
        }
    }
}

/// A numeric table written to `tables/<name>.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Table {
        Table { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// A JSON document written next to the report, named `<name>.json`.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub value: serde_json::Value,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOutput {
    pub records: Vec<Record>,
    pub tables: Vec<Table>,
    pub artifacts: Vec<Artifact>,
}

impl SuiteOutput {
    pub fn record(&mut self, r: Record) {
        self.records.push(r);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: Config,
    pub records: Vec<Record>,
    pub pass: bool,
}

impl Report {
    pub fn new(config: &Config, records: Vec<Record>) -> Report {
        let pass = records.iter().all(|r| r.pass);
        Report { config: config.clone(), records, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r)?;
        }
        w.into_inner().map_err(|e| io::Error::new(io::ErrorKind::Other, e.to_string()))
    }
}

fn table_csv(t: &Table) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.header)?;
    for row in &t.rows {
        w.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    w.into_inner().map_err(|e| io::Error::new(io::ErrorKind::Other, e.to_string()))
}

/// Writes the report in the configured format plus every table and
/// artifact under `out`.
pub fn write_outputs(out: &Path, report: &Report, tables: &[Table], artifacts: &[Artifact]) -> io::Result<()> {
    fs::create_dir_all(out.join("tables"))?;
    match report.config.format {
        Format::Json => fs::write(out.join("report.json"), report.to_json())?,
        Format::Csv => fs::write(out.join("report.csv"), report.to_csv()?)?,
    }
    for t in tables {
        fs::write(out.join("tables").join(format!("{}.csv", t.name)), table_csv(t)?)?;
    }
    for a in artifacts {
        let mut s = serde_json::to_string_pretty(&a.value).map_err(io::Error::other)?;
        s.push('\n');
        fs::write(out.join(format!("{}.json", a.name)), s)?;
    }
    Ok(())
}

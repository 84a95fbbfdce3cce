//! Verification suites for `cat1-boundary`, their JSON/CSV report and the
//! `cat1-verify` command line.
//!
//! Every suite draws from its own ChaCha stream derived from the master
//! seed, and sampling happens before any parallel work, so a report depends
//! only on the configuration.

pub mod config;
pub mod report;
pub mod suites;

use std::io;

pub use config::{Config, ConfigError, Format, Selection, Suite};
pub use report::{Record, Report, Table};

use report::write_outputs;

/// Everything one run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub tables: Vec<Table>,
    pub artifacts: Vec<report::Artifact>,
}

impl RunOutcome {
    /// 0 when every record passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            0
        } else {
            1
        }
    }
}

/// Runs the selected suites concurrently and assembles their output in
/// suite order.
pub fn run(cfg: &Config) -> RunOutcome {
    let selected = cfg.suite.suites();
    let outputs: Vec<report::SuiteOutput> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&s| scope.spawn(move || suites::run_suite(s, cfg)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut records = Vec::new();
    let mut tables = Vec::new();
    let mut artifacts = Vec::new();
    for o in outputs {
        records.extend(o.records);
        tables.extend(o.tables);
        artifacts.extend(o.artifacts);
    }
    RunOutcome { report: Report::new(cfg, records), tables, artifacts }
}

/// [`run`] followed by writing the report, tables and artifacts to
/// `cfg.out`.
pub fn run_and_write(cfg: &Config) -> io::Result<RunOutcome> {
    let outcome = run(cfg);
    write_outputs(&cfg.out, &outcome.report, &outcome.tables, &outcome.artifacts)?;
    Ok(outcome)
}

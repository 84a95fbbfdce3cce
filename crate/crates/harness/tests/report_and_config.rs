use std::path::PathBuf;

use cat1_verify::config::{parse_config, ConfigError, Format, Overrides, Selection, Suite};
use cat1_verify::report::{Record, Report, Sense, Table};
use cat1_verify::suites::{par_map, suite_rng};
use cat1_verify::{run, Config, RunOutcome};
use rand::Rng;

#[test]
fn config_files_parse() {
    let o = parse_config("# comment\n\nsuite = holder\npairs=40\n fan = 64 \nformat = csv\nout = x/y\n").unwrap();
    assert_eq!(o.suite, Some(Selection::One(Suite::Holder)));
    assert_eq!(o.pairs, Some(40));
    assert_eq!(o.fan, Some(64));
    assert_eq!(o.format, Some(Format::Csv));
    assert_eq!(o.out, Some(PathBuf::from("x/y")));
    assert_eq!(o.seed, None);
}

#[test]
fn config_errors_name_the_problem() {
    assert_eq!(parse_config("fan 64").unwrap_err(), ConfigError::Syntax { line: 1, text: "fan 64".into() });
    assert_eq!(parse_config("\nspeed = 3").unwrap_err(), ConfigError::UnknownKey { line: 2, key: "speed".into() });
    assert!(matches!(parse_config("seed = -1"), Err(ConfigError::Value { .. })));
    assert!(matches!(parse_config("format = xml"), Err(ConfigError::Value { .. })));
    let tiny = Overrides { grid: Some(8), ..Overrides::default() };
    assert!(matches!(tiny.resolve(), Err(ConfigError::Value { .. })));
}

#[test]
fn later_overrides_win() {
    let file = parse_config("seed = 3\nfan = 64").unwrap();
    let flags = Overrides { seed: Some(9), ..Overrides::default() };
    let cfg = file.merged(flags).resolve().unwrap();
    assert_eq!((cfg.seed, cfg.fan, cfg.grid), (9, 64, 256));
    assert_eq!(Overrides::default().resolve().unwrap(), Config::default());
}

#[test]
fn failing_records_give_exit_code_1() {
    let ok = Record::new("s", "a", "p", "b", 0.5, 1.0, Sense::AtMost, 1);
    let bad = Record::new("s", "b", "p", "b", 0.5, 1.0, Sense::AtLeast, 1);
    let nan = Record::new("s", "c", "p", "b", f64::NAN, 1.0, Sense::AtMost, 1);
    assert!(ok.pass && !bad.pass && !nan.pass);
    let cfg = Config::default();
    let outcome = |records| RunOutcome { report: Report::new(&cfg, records), tables: vec![], artifacts: vec![] };
    assert_eq!(outcome(vec![ok.clone()]).exit_code(), 0);
    assert_eq!(outcome(vec![ok, bad]).exit_code(), 1);
    assert_eq!(outcome(vec![]).exit_code(), 0);
}

#[test]
fn tables_keep_their_shape() {
    let mut t = Table::new("t", &["a", "b"]);
    t.push(vec![1.0, 2.0]);
    assert_eq!(t.rows.len(), 1);
}

#[test]
fn suite_streams_are_independent_and_reproducible() {
    let a: u64 = suite_rng(7, Suite::Flow).gen();
    assert_eq!(a, suite_rng(7, Suite::Flow).gen::<u64>());
    assert_ne!(a, suite_rng(7, Suite::Metrics).gen::<u64>());
    assert_ne!(a, suite_rng(8, Suite::Flow).gen::<u64>());
}

#[test]
fn parallel_map_keeps_order() {
    let xs: Vec<u32> = (0..1000).collect();
    assert_eq!(par_map(&xs, |x| x * 2), xs.iter().map(|x| x * 2).collect::<Vec<_>>());
}

#[test]
fn a_single_suite_runs_in_process() {
    let cfg = Config { suite: Selection::One(Suite::Spaces), ..Config::default() };
    let out = run(&cfg);
    assert!(out.report.pass);
    assert!(out.report.records.iter().all(|r| r.suite == "spaces"));
    assert_eq!(out.report.to_json(), run(&cfg).report.to_json());
}

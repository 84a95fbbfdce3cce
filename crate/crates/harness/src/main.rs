use std::path::PathBuf;
use std::process::ExitCode;

use cat1_verify::config::{read_config, Format, Overrides, Selection};
use cat1_verify::run_and_write;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cat1-verify", version, about = "Verification harness for boundary maps of CAT(-1) spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write report.json and tables/*.csv.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// spaces, boundary, metrics, flow, circumcenter, extension, holder, qi or all.
    #[arg(long)]
    suite: Option<Selection>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    fan: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    let Command::Verify(args) = Cli::parse().command;
    let file = match &args.config {
        Some(p) => match read_config(p) {
            Ok(o) => o,
            Err(e) => {
                eprintln!("config error: {e}");
                return ExitCode::from(2);
            }
        },
        None => Overrides::default(),
    };
    let flags = Overrides {
        suite: args.suite,
        seed: args.seed,
        fan: args.fan,
        grid: args.grid,
        pairs: args.pairs,
        out: args.out,
        format: args.format,
    };
    let cfg = match file.merged(flags).resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run_and_write(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cannot write to {}: {e}", cfg.out.display());
            return ExitCode::from(2);
        }
    };
    for r in &outcome.report.records {
        println!(
            "[{}] {}/{}: worst {:e} (tolerance {:e})",
            if r.pass { "PASS" } else { "FAIL" },
            r.suite,
            r.check,
            r.worst_observed,
            r.tolerance
        );
    }
    let failures: Vec<_> = outcome.report.failures().collect();
    if failures.is_empty() {
        return ExitCode::SUCCESS;
    }
    eprintln!("{} assertion(s) failed:", failures.len());
    for r in failures {
        eprintln!("{}", serde_json::to_string(r).expect("record serializes"));
    }
    ExitCode::from(1)
}

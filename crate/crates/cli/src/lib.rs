//! Library side of the `dqkit` binary: the expression language, subcommand
//! dispatch, verification suites and reports.

pub mod commands;
pub mod expr;
pub mod report;
pub mod suites;

use std::io::Write;
use std::time::Instant;

use clap::Parser;

pub use commands::{Cli, CliError};
pub use report::{Outcome, Params, Report};

/// Exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed = 0,
    CheckFailed = 1,
    Usage = 2,
}

/// Runs the command line `args` (including the program name), writing to the
/// given streams.
pub fn run(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Status {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version come through here too, on stdout
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return Status::Usage;
            }
            let _ = write!(stdout, "{}", e.render());
            return Status::Passed;
        }
    };
    let start = Instant::now();
    let outcome = match commands::dispatch(&cli.global, &cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return Status::Usage;
        }
    };
    let report = Report::new(args[1..].to_vec(), cli.global.params(), outcome, start.elapsed());
    match cli.global.json.as_deref() {
        Some("-") => {
            let _ = writeln!(stdout, "{}", report.to_json());
        }
        Some(path) => {
            if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
                let _ = writeln!(stderr, "error: {}", CliError::Io(e));
                return Status::Usage;
            }
            let _ = write!(stdout, "{}", report.to_text());
        }
        None => {
            let _ = write!(stdout, "{}", report.to_text());
        }
    }
    if report.passed {
        Status::Passed
    } else {
        Status::CheckFailed
    }
}

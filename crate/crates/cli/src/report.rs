//! Machine-readable run reports.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use dqkit_core::check::{Check, CheckList};
use dqkit_core::JSON_SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct Params {
    pub d: usize,
    pub p: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub seed: u64,
}

/// What a subcommand produced, before timing and bookkeeping.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub checks: CheckList,
    pub result: Value,
    /// Human-readable lines printed above the check list.
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn new(result: Value) -> Self {
        Self { result, ..Self::default() }
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    pub fn check(mut self, c: Check) -> Self {
        self.checks.push(c);
        self
    }

    pub fn checks(mut self, list: CheckList) -> Self {
        self.checks.extend(list);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Vec<String>,
    pub params: Params,
    pub checks: CheckList,
    pub result: Value,
    pub duration_ms: u64,
    pub passed: bool,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: Vec<String>, params: Params, outcome: Outcome, duration: Duration) -> Self {
        let passed = outcome.checks.all_passed();
        Self {
            schema: JSON_SCHEMA_VERSION,
            command,
            params,
            checks: outcome.checks,
            result: outcome.result,
            duration_ms: duration.as_millis().try_into().unwrap_or(u64::MAX),
            passed,
            lines: outcome.lines,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The terminal rendering: result lines, one line per check, a summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(s, "{l}");
        }
        for c in self.checks.iter() {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            let _ = write!(s, "{tag}  {}", c.name);
            if !c.passed() && !c.witness.is_null() {
                let _ = write!(s, "  witness: {}", c.witness);
            }
            s.push('\n');
        }
        if !self.checks.is_empty() {
            let failed = self.checks.failures().count();
            let _ = writeln!(
                s,
                "{} checks, {} failed ({:.2} s)",
                self.checks.len(),
                failed,
                self.duration_ms as f64 / 1000.0
            );
        }
        s
    }
}

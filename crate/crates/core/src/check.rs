//! Named pass/fail checks with witnesses, shared by the verification routines
//! and the command-line reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Offending data for failures; optional summary data for passes.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Pass, witness: Value::Null }
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Self {
        Self { name: name.into(), status: Status::Fail, witness }
    }

    /// Pass/fail from a boolean, attaching the witness either way.
    pub fn from_bool(name: impl Into<String>, ok: bool, witness: Value) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, witness }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// An ordered list of checks.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckList(pub Vec<Check>);

impl CheckList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Check) {
        self.0.push(c);
    }

    pub fn extend(&mut self, other: CheckList) {
        self.0.extend(other.0);
    }

    pub fn all_passed(&self) -> bool {
        self.0.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> + '_ {
        self.0.iter().filter(|c| !c.passed())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Check> + '_ {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl IntoIterator for CheckList {
    type Item = Check;
    type IntoIter = std::vec::IntoIter<Check>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

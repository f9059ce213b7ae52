//! Check records shared by every verification suite.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub params: String,
    pub pass: bool,
    /// Counterexample or short explanation; empty when there is nothing to add.
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        suite: &str,
        check: &str,
        params: impl Into<String>,
        pass: bool,
        witness: impl Into<String>,
    ) {
        self.records.push(CheckRecord {
            suite: suite.to_string(),
            check: check.to_string(),
            params: params.into(),
            pass,
            witness: witness.into(),
        });
    }

    /// Informational record for something deliberately not checked.
    pub fn notice(&mut self, suite: &str, params: impl Into<String>, message: impl Into<String>) {
        self.push(suite, "notice", params, true, message);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn find(&self, check: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check == check)
    }

    pub fn failure_summary(&self) -> String {
        let names: Vec<String> = self
            .failures()
            .map(|r| {
                if r.witness.is_empty() {
                    r.check.clone()
                } else {
                    format!("{} ({})", r.check, r.witness)
                }
            })
            .collect();
        if names.is_empty() {
            "none".into()
        } else {
            names.join("; ")
        }
    }
}

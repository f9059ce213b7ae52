//! Run reports in a human table and a canonical JSON form.

use modata::Report;
use serde_json::{json, Map, Value};

pub struct RunReport {
    pub command: String,
    pub model: String,
    pub config: Map<String, Value>,
    pub report: Report,
    /// Extra top-level payload, e.g. a matrix dump.
    pub extra: Map<String, Value>,
}

impl RunReport {
    pub fn new(command: &str, model: &str) -> Self {
        RunReport {
            command: command.to_string(),
            model: model.to_string(),
            config: Map::new(),
            report: Report::new(),
            extra: Map::new(),
        }
    }

    pub fn config(&mut self, key: &str, value: impl Into<Value>) {
        self.config.insert(key.to_string(), value.into());
    }

    pub fn pass(&self) -> bool {
        self.report.all_pass()
    }

    /// Pretty JSON; keys are sorted so equal runs give equal bytes.
    pub fn to_json(&self) -> String {
        let records: Vec<Value> = self
            .report
            .records
            .iter()
            .map(|r| {
                json!({
                    "suite": r.suite,
                    "check": r.check,
                    "params": r.params,
                    "pass": r.pass,
                    "witness": r.witness,
                })
            })
            .collect();
        let mut top = self.extra.clone();
        top.insert("tool".into(), "modata".into());
        top.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        top.insert("command".into(), self.command.clone().into());
        top.insert("model".into(), self.model.clone().into());
        top.insert("config".into(), Value::Object(self.config.clone()));
        top.insert("records".into(), Value::Array(records));
        top.insert("pass".into(), self.pass().into());
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "modata {}  {}  model={}",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.model
        );
        for (k, v) in &self.config {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("  {k}={v}"));
        }
        out.push('\n');
        let wc = self
            .report
            .records
            .iter()
            .map(|r| r.check.chars().count())
            .max()
            .unwrap_or(0);
        for r in &self.report.records {
            let status = match (r.check.as_str(), r.pass) {
                ("notice", _) => "NOTE",
                (_, true) => "PASS",
                (_, false) => "FAIL",
            };
            let pad = wc - r.check.chars().count();
            let mut line = format!(
                "{status}  {:<12} {}{}  {}",
                r.suite,
                r.check,
                " ".repeat(pad),
                r.params
            );
            if !r.witness.is_empty() {
                line.push_str(&format!("  [{}]", r.witness));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let failed = self.report.failures().count();
        let checks = self
            .report
            .records
            .iter()
            .filter(|r| r.check != "notice")
            .count();
        out.push_str(&format!(
            "summary: {} passed, {failed} failed\n",
            checks - failed
        ));
        out
    }
}

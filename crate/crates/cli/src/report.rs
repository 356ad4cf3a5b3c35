use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "cardlab-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub ok: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Check {
    pub fn new(id: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            ok,
            detail: detail.into(),
            data: Value::Null,
        }
    }

    pub fn with_data(mut self, data: impl Serialize) -> Self {
        self.data = serde_json::to_value(data).expect("report data serializes");
        self
    }

    /// A failed check carrying an engine error.
    pub fn error(id: impl Into<String>, e: impl std::fmt::Display) -> Self {
        Self::new(id, false, format!("error: {e}"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &str, params: BTreeMap<String, Value>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let failed = checks.iter().filter(|c| !c.ok).count();
        Self {
            schema: SCHEMA,
            command: command.to_string(),
            params,
            passed: checks.len() - failed,
            failed,
            ok: failed == 0,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{} {}: {}", if c.ok { "PASS" } else { "FAIL" }, c.id, c.detail);
        }
        let _ = writeln!(out, "{}: {} passed, {} failed", self.command, self.passed, self.failed);
        out
    }
}

//! Machine-readable check results.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;

/// The mathematical statement a check exercises.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchor {
    pub label: String,
    pub statement: String,
}

impl Anchor {
    pub fn new(label: &str, statement: &str) -> Self {
        Anchor {
            label: label.to_string(),
            statement: statement.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// Carries enough data to replay the failure.
    Fail { counterexample: Value },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check_id: String,
    pub anchor: Anchor,
    pub status: Status,
    pub metrics: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall-clock time; left out unless explicitly recorded so that JSON
    /// output stays byte-stable between runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl Report {
    pub fn new(check_id: impl Into<String>, anchor: Anchor) -> Self {
        Report {
            check_id: check_id.into(),
            anchor,
            status: Status::Pass,
            metrics: BTreeMap::new(),
            seed: None,
            notes: Vec::new(),
            duration_ms: None,
        }
    }

    pub fn metric(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metrics.insert(key.to_string(), value.into());
        self
    }

    pub fn set_metric(&mut self, key: &str, value: impl Into<Value>) {
        self.metrics.insert(key.to_string(), value.into());
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Marks the report failed. The first failure wins so the recorded
    /// counterexample is the earliest one found.
    pub fn fail(&mut self, counterexample: impl Into<Value>) {
        if !self.is_fail() {
            self.status = Status::Fail {
                counterexample: counterexample.into(),
            };
        }
    }

    pub fn failed_with(mut self, counterexample: impl Into<Value>) -> Self {
        self.fail(counterexample);
        self
    }

    pub fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped {
            reason: reason.into(),
        };
        self
    }

    /// Turns an error into a report: budget problems become `skipped`,
    /// everything else a failure.
    pub fn from_error(check_id: impl Into<String>, anchor: Anchor, err: &Error) -> Self {
        let r = Report::new(check_id, anchor);
        if err.is_budget() {
            r.skip(err.to_string())
        } else {
            r.failed_with(serde_json::json!({ "error": err.to_string() }))
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self.status, Status::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.status, Status::Fail { .. })
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.status, Status::Skipped { .. })
    }

    pub fn metric_u64(&self, key: &str) -> Option<u64> {
        self.metrics.get(key).and_then(Value::as_u64)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match &self.status {
            Status::Pass => "PASS",
            Status::Fail { .. } => "FAIL",
            Status::Skipped { .. } => "SKIP",
        };
        write!(f, "[{tag}] {} ({})", self.check_id, self.anchor.label)?;
        let metrics: Vec<String> = self
            .metrics
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if !metrics.is_empty() {
            write!(f, " {}", metrics.join(" "))?;
        }
        if let Some(seed) = self.seed {
            write!(f, " seed={seed}")?;
        }
        if let Some(ms) = self.duration_ms {
            write!(f, " time={ms}ms")?;
        }
        match &self.status {
            Status::Fail { counterexample } => write!(f, "\n  counterexample: {counterexample}")?,
            Status::Skipped { reason } => write!(f, "\n  skipped: {reason}")?,
            Status::Pass => {}
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

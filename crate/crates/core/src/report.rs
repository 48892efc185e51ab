//! Check results and run reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub expected: Value,
    pub computed: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckResult {
    /// Pass iff `expected == computed`.
    pub fn compare(name: impl Into<String>, expected: impl Serialize, computed: impl Serialize) -> Self {
        let expected = serde_json::to_value(expected).expect("serializable");
        let computed = serde_json::to_value(computed).expect("serializable");
        let status = if expected == computed { Status::Pass } else { Status::Fail };
        CheckResult { name: name.into(), status, expected, computed, detail: None, elapsed_ms: None }
    }

    pub fn predicate(name: impl Into<String>, ok: bool, expected: impl Serialize, computed: impl Serialize) -> Self {
        CheckResult {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected: serde_json::to_value(expected).expect("serializable"),
            computed: serde_json::to_value(computed).expect("serializable"),
            detail: None,
            elapsed_ms: None,
        }
    }

    pub fn failure(name: impl Into<String>, expected: impl Serialize, err: impl std::fmt::Display) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Fail,
            expected: serde_json::to_value(expected).expect("serializable"),
            computed: Value::Null,
            detail: Some(err.to_string()),
            elapsed_ms: None,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Skip,
            expected: Value::Null,
            computed: Value::Null,
            detail: Some(reason.into()),
            elapsed_ms: None,
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

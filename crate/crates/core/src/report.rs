//! Versioned, deterministic analysis reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::fixtures::{FixtureClass, Origin};

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceId {
    pub name: String,
    pub kind: FixtureClass,
    /// SHA-256 of the canonical input, so reports on equal inputs can be matched.
    pub hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub failures: Vec<String>,
    pub detail: Value,
}

/// A value the report must contain at `pointer`, which is `/suite/...` into the details.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    pub pointer: String,
    pub expected: Value,
    pub actual: Value,
    pub origin: Origin,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub tool_version: &'static str,
    pub instance: InstanceId,
    pub suites: Vec<SuiteResult>,
    pub expectations: Vec<Expectation>,
    /// Wall-clock microseconds per suite; absent unless asked for, since it breaks byte equality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<BTreeMap<String, u128>>,
}

/// Hex SHA-256 of the compact JSON form. `serde_json` maps keep keys sorted, so equal
/// values hash equally whatever the key order of the source file.
pub fn canonical_hash(v: &Value) -> String {
    let text = serde_json::to_string(v).expect("values serialize");
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl AnalysisReport {
    pub fn new(name: impl Into<String>, kind: FixtureClass, source: &Value) -> Self {
        AnalysisReport {
            schema: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            instance: InstanceId { name: name.into(), kind, hash: canonical_hash(source) },
            suites: Vec::new(),
            expectations: Vec::new(),
            timing_us: None,
        }
    }

    pub fn push(&mut self, suite: &str, failures: Vec<String>, detail: impl Serialize) {
        self.suites.push(SuiteResult {
            suite: suite.to_string(),
            passed: failures.is_empty(),
            failures,
            detail: serde_json::to_value(detail).expect("details serialize"),
        });
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.suite == name)
    }

    /// Looks up `/suite/rest` in the suite details.
    pub fn lookup(&self, pointer: &str) -> Option<&Value> {
        let trimmed = pointer.strip_prefix('/')?;
        let (suite, rest) = trimmed.split_once('/').map_or((trimmed, ""), |(a, b)| (a, b));
        let detail = &self.suite(suite)?.detail;
        if rest.is_empty() {
            Some(detail)
        } else {
            detail.pointer(&format!("/{rest}"))
        }
    }

    /// Records an expectation; pointers into suites that did not run are skipped.
    pub fn expect(&mut self, pointer: &str, expected: Value, origin: Origin) {
        let suite = pointer.trim_start_matches('/').split('/').next().unwrap_or_default();
        if self.suite(suite).is_none() {
            return;
        }
        let actual = self.lookup(pointer).cloned().unwrap_or(Value::Null);
        let holds = actual == expected;
        self.expectations.push(Expectation { pointer: pointer.to_string(), expected, actual, origin, holds });
    }

    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed) && self.expectations.iter().all(|e| e.holds)
    }

    /// Failure lines of every suite and unmet expectation.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.suites.iter().flat_map(|s| s.failures.iter().map(move |f| format!("{}: {f}", s.suite))).collect();
        for e in self.expectations.iter().filter(|e| !e.holds) {
            out.push(format!("{}: expected {}, found {}", e.pointer, e.expected, e.actual));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hash_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"a":1,"b":[2,3]}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{ "b": [2, 3], "a": 1 }"#).unwrap();
        assert_eq!(canonical_hash(&a), canonical_hash(&b));
        assert_eq!(canonical_hash(&a).len(), 64);
    }

    #[test]
    fn expectations_resolve_into_details() {
        let mut r = AnalysisReport::new("x", FixtureClass::Poset, &json!({}));
        r.push("poset", vec![], json!({"profile": {"predicted_size": 5}}));
        r.expect("/poset/profile/predicted_size", json!(5), Origin::Reference);
        r.expect("/poset/profile/missing", json!(1), Origin::Derived);
        r.expect("/other/x", json!(1), Origin::Derived);
        assert_eq!(r.expectations.len(), 2);
        assert!(r.expectations[0].holds);
        assert!(!r.passed());
        assert_eq!(r.failures().len(), 1);
    }
}

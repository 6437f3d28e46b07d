//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One failed instance of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub case: String,
    pub detail: String,
}

/// Outcome of a verification sweep.
///
/// Serialized as `{check, params, passed, violations, witnesses, elapsed_ms}`.
/// Everything except `elapsed_ms` is a pure function of the inputs, so two runs
/// with the same parameters produce identical JSON apart from that field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub passed: bool,
    pub violations: Vec<Violation>,
    pub witnesses: Vec<Value>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    /// One line per report, e.g. `PASS lieby (231 instances)`.
    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let instances = self
            .params
            .get("instances")
            .map(|v| format!(" ({v} instances)"))
            .unwrap_or_default();
        let violations = if self.violations.is_empty() {
            String::new()
        } else {
            format!(", {} violations", self.violations.len())
        };
        format!("{status} {}{instances}{violations}", self.check)
    }
}

pub(crate) struct ReportBuilder {
    check: String,
    params: BTreeMap<String, Value>,
    violations: Vec<Violation>,
    witnesses: Vec<Value>,
    instances: u64,
    started: Instant,
}

impl ReportBuilder {
    pub(crate) fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            params: BTreeMap::new(),
            violations: Vec::new(),
            witnesses: Vec::new(),
            instances: 0,
            started: Instant::now(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub(crate) fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    /// Record one checked instance; a failing instance becomes a violation.
    pub(crate) fn check(&mut self, ok: bool, case: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violations.push(Violation {
                case: case(),
                detail: detail(),
            });
        }
    }

    pub(crate) fn add_instances(&mut self, count: u64) {
        self.instances += count;
    }

    pub(crate) fn violation(&mut self, case: String, detail: String) {
        self.violations.push(Violation { case, detail });
    }

    pub(crate) fn witness(&mut self, value: Value) {
        self.witnesses.push(value);
    }

    pub(crate) fn finish(mut self) -> VerificationReport {
        self.params
            .insert("instances".to_string(), Value::from(self.instances));
        VerificationReport {
            check: self.check,
            passed: self.violations.is_empty(),
            params: self.params,
            violations: self.violations,
            witnesses: self.witnesses,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

/// i128 values go into JSON as numbers when they fit in i64, as strings otherwise.
pub(crate) fn int_value(v: i128) -> Value {
    match i64::try_from(v) {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(v.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_tracks_violations() {
        let mut b = ReportBuilder::new("demo").param("n", 3);
        b.check(true, || "ok".into(), String::new);
        let r = b.finish();
        assert!(r.passed);
        assert_eq!(r.params["instances"], Value::from(1u64));

        let mut b = ReportBuilder::new("demo");
        b.check(false, || "n=1".into(), || "1 != 2".into());
        let r = b.finish();
        assert!(!r.passed);
        assert_eq!(r.violations[0].case, "n=1");
    }

    #[test]
    fn json_schema_keys() {
        let r = ReportBuilder::new("x").finish();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["check", "params", "passed", "violations", "witnesses", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}

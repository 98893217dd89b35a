//! Serializable experiment results.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One asserted comparison inside a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    /// One of `<=`, `>=`, `<`, `~`.
    pub relation: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub ratios: Vec<f64>,
    pub max_ratio: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            ratios: Vec::new(),
            max_ratio: None,
            tolerance: None,
            pass: true,
            checks: Vec::new(),
            series: BTreeMap::new(),
            notes: Vec::new(),
            timestamp: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn push_ratio(&mut self, r: f64) {
        self.ratios.push(r);
        self.max_ratio = Some(self.max_ratio.map_or(r, |m| m.max(r)));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn push_series(&mut self, key: &str, v: f64) {
        self.series.entry(key.to_string()).or_default().push(v);
    }

    fn record(&mut self, name: String, value: f64, bound: f64, relation: &str, pass: bool) -> bool {
        self.pass &= pass;
        self.checks.push(Check {
            name,
            value,
            bound,
            relation: relation.to_string(),
            pass,
        });
        pass
    }

    pub fn check_le(&mut self, name: impl Into<String>, value: f64, bound: f64) -> bool {
        self.record(name.into(), value, bound, "<=", value <= bound)
    }

    pub fn check_lt(&mut self, name: impl Into<String>, value: f64, bound: f64) -> bool {
        self.record(name.into(), value, bound, "<", value < bound)
    }

    pub fn check_ge(&mut self, name: impl Into<String>, value: f64, bound: f64) -> bool {
        self.record(name.into(), value, bound, ">=", value >= bound)
    }

    /// Passes when `|value - target| <= tol`; `bound` records the target.
    pub fn check_close(&mut self, name: impl Into<String>, value: f64, target: f64, tol: f64) -> bool {
        let ok = (value - target).abs() <= tol;
        let name = format!("{} (tol {tol:e})", name.into());
        self.record(name, value, target, "~", ok)
    }

    pub fn failing_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = ExperimentReport::new("demo").param("p", 2.0);
        r.push_ratio(0.5);
        r.push_ratio(0.75);
        r.check_le("ratio", 0.75, 1.0);
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.max_ratio, Some(0.75));
        assert!(back.pass);
    }

    #[test]
    fn failing_check_flips_pass() {
        let mut r = ExperimentReport::new("demo");
        assert!(!r.check_close("x", 1.1, 1.0, 1e-3));
        assert!(!r.pass);
        assert_eq!(r.failing_checks().len(), 1);
    }
}

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::Expectation;
use crate::normed_space::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Estimate,
}

impl Status {
    pub fn matches(self, expect: Expectation) -> bool {
        matches!(
            (self, expect),
            (Status::Pass, Expectation::Pass)
                | (Status::Fail, Expectation::Fail)
                | (Status::Estimate, Expectation::Estimate)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub status: Status,
    pub values: BTreeMap<String, serde_json::Value>,
    pub witnesses: Vec<Vector>,
    pub residuals: Vec<f64>,
    pub runtime_ms: u64,
}

impl Report {
    /// The report without its timing, for determinism comparisons.
    pub fn body(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("runtime_ms");
        }
        v
    }
}

/// Long-format table: one row per numeric value of every report.
pub fn to_csv(reports: &[Report]) -> String {
    let mut out = String::from("scenario,status,key,value\n");
    for r in reports {
        let status = serde_json::to_value(r.status).expect("status serializes");
        let status = status.as_str().unwrap_or_default();
        for (key, value) in &r.values {
            if let Some(x) = value.as_f64() {
                let _ = writeln!(out, "{},{},{},{}", r.scenario, status, key, x);
            }
        }
        if let Some(max) = r.residuals.iter().copied().reduce(f64::max) {
            let _ = writeln!(out, "{},{},max_residual,{}", r.scenario, status, max);
        }
        let _ = writeln!(out, "{},{},runtime_ms,{}", r.scenario, status, r.runtime_ms);
    }
    out
}

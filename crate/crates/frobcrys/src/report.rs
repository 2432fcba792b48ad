//! Scenario reports.
//!
//! Everything but `timings` is a deterministic function of the config and
//! seed. JSON objects are emitted with sorted keys.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ScenarioName;
use crate::table::TableRow;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub met: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub scenario: ScenarioName,
    pub config: Value,
    pub verdicts: BTreeMap<String, Value>,
    pub witnesses: BTreeMap<String, Value>,
    pub expectations: Vec<Expectation>,
    pub provenance: BTreeMap<String, Value>,
    pub table: Vec<TableRow>,
    pub elapsed_ms: f64,
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Report {
    pub fn new(scenario: ScenarioName, config: Value) -> Report {
        Report {
            scenario,
            config,
            verdicts: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            expectations: Vec::new(),
            provenance: BTreeMap::new(),
            table: Vec::new(),
            elapsed_ms: 0.0,
        }
    }

    pub fn verdict<T: Serialize>(&mut self, key: &str, v: T) {
        self.verdicts.insert(key.into(), to_value(v));
    }

    pub fn witness<T: Serialize>(&mut self, key: &str, v: T) {
        self.witnesses.insert(key.into(), to_value(v));
    }

    pub fn provenance<T: Serialize>(&mut self, key: &str, v: T) {
        self.provenance.insert(key.into(), to_value(v));
    }

    /// Records an expectation when one was supplied.
    pub fn expect<T: Serialize, U: Serialize>(&mut self, name: &str, expected: Option<T>, actual: U) {
        if let Some(e) = expected {
            let (expected, actual) = (to_value(e), to_value(actual));
            let met = expected == actual;
            self.expectations.push(Expectation { name: name.into(), expected, actual, met });
        }
    }

    pub fn all_met(&self) -> bool {
        self.expectations.iter().all(|e| e.met)
    }

    pub fn failed(&self) -> Vec<&Expectation> {
        self.expectations.iter().filter(|e| !e.met).collect()
    }

    /// The report without timings.
    pub fn payload(&self) -> Value {
        json!({
            "scenario": self.scenario.as_str(),
            "config": self.config,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "expectations": self.expectations,
            "all_expectations_met": self.all_met(),
            "provenance": self.provenance,
            "table": self.table,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.payload();
        v["timings"] = json!({ "elapsed_ms": self.elapsed_ms });
        v
    }

    pub fn payload_text(&self) -> String {
        serde_json::to_string_pretty(&self.payload()).expect("json output")
    }

    pub fn to_json_text(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json output")
    }
}

/// Table rows of a JSON report, for the JSON to CSV direction.
pub fn table_of(report: &Value) -> Result<Vec<TableRow>, serde_json::Error> {
    serde_json::from_value(report.get("table").cloned().unwrap_or(Value::Array(Vec::new())))
}

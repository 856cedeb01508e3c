//! Structured verification records, serialized to JSON by the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Version of the serialized report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// One measured quantity against its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Hard checks decide the exit status; soft ones are informational.
    pub hard: bool,
    /// Inputs needed to reproduce the measurement (seeds, spectral parameters).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, String>,
}

impl CheckRecord {
    /// `value <= tolerance`; NaN never passes.
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value <= tolerance, hard: true, inputs: BTreeMap::new() }
    }

    /// Passes when `|value - target| <= tolerance`; `value` holds the deviation.
    pub fn deviation(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let mut r = Self::new(name, (value - target).abs(), tolerance);
        r.inputs.insert("measured".into(), format!("{value:?}"));
        r.inputs.insert("target".into(), format!("{target:?}"));
        r
    }

    pub fn soft(mut self) -> Self {
        self.hard = false;
        self
    }

    pub fn with_input(mut self, key: impl Into<String>, value: impl std::fmt::Debug) -> Self {
        self.inputs.insert(key.into(), format!("{value:?}"));
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self { schema_version: SCHEMA_VERSION, records: Vec::new() }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    /// All hard checks passed.
    pub fn passed(&self) -> bool {
        self.records.iter().filter(|r| r.hard).all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.hard && !r.passed)
    }

    pub fn records_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckRecord> {
        self.records.iter().filter(move |r| r.name == name)
    }

    /// Largest value recorded under `name` (NaN propagates).
    pub fn max_value(&self, name: &str) -> Option<f64> {
        self.records_named(name).map(|r| r.value).reduce(|a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
    }
}

//! JSON reports shared by the ideal computations.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Checked exactly on the stated window.
    Verified,
    /// A window counterexample was found.
    Refuted,
    /// No window witness either way.
    Unknown,
}

/// `{statement, window, verdict, witnesses, budget}`, plus free-form details.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub statement: String,
    pub window: Value,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub budget: Value,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    /// Canonical JSON (object keys sorted).
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialise")
    }
}

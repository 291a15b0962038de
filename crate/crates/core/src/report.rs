//! Machine-readable pass/fail records shared by every computation and by
//! all CLI subcommands.
//!
//! A [`Report`] is a named list of [`Check`]s plus a free-form `data`
//! payload. Its JSON form is the single output schema of the toolkit:
//!
//! ```json
//! {
//!   "command": "validate",
//!   "subject": "ising",
//!   "pass": true,
//!   "seed": null,
//!   "checks": [ { "name": "associativity", "pass": true, "detail": "...",
//!                 "lhs": null, "rhs": null, "residual": 0.0, "witness": null } ],
//!   "data": { }
//! }
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub residual: Option<f64>,
    /// Label indices of a counterexample, when the check failed on one.
    pub witness: Option<Vec<usize>>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
            lhs: None,
            rhs: None,
            residual: None,
            witness: None,
        }
    }

    /// A check comparing two reals: passes iff `|lhs - rhs| < tolerance`.
    pub fn compare(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = (lhs - rhs).abs();
        let pass = residual < tolerance;
        let detail = format!("lhs = {lhs:.12}, rhs = {rhs:.12}, tolerance {tolerance:e}");
        Check {
            lhs: Some(lhs),
            rhs: Some(rhs),
            residual: Some(residual),
            ..Check::new(name, pass, detail)
        }
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = Some(residual);
        self
    }

    pub fn with_witness(mut self, witness: Vec<usize>) -> Self {
        self.witness = Some(witness);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub subject: String,
    pub pass: bool,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, subject: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            subject: subject.into(),
            pass: true,
            seed: None,
            checks: Vec::new(),
            data: Value::Object(Default::default()),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        if let Value::Object(map) = &mut self.data {
            map.insert(
                key.to_string(),
                serde_json::to_value(value).unwrap_or(Value::Null),
            );
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        // Report contains only plain data, serialization cannot fail.
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

//! Machine-readable verification reports.
//!
//! A report is a flat list of named checks, each carrying the measured
//! residual and the tolerance it was held to. Checks whose hypotheses fail
//! are listed as skipped with a reason; purely informational quantities go in
//! `notes`. The JSON layout is described by `docs/report.schema.json`.

use serde::{Deserialize, Serialize};

use crate::linalg::ComplexMatrix;

pub const SCHEMA_VERSION: &str = "1.0.0";
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Note {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub schema_version: String,
    pub artifact_version: String,
    pub family_descriptor: String,
    pub generated_at: u64,
    pub all_passed: bool,
    pub checks: Vec<Check>,
    pub skipped: Vec<Skipped>,
    pub notes: Vec<Note>,
    pub matrices_dumped: Vec<String>,
}

impl VerificationReport {
    pub fn new(family_descriptor: impl Into<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            artifact_version: ARTIFACT_VERSION.to_string(),
            family_descriptor: family_descriptor.into(),
            generated_at: 0,
            all_passed: true,
            checks: Vec::new(),
            skipped: Vec::new(),
            notes: Vec::new(),
            matrices_dumped: Vec::new(),
        }
    }

    /// Records `residual ≤ tolerance`. Non-finite residuals are stored as
    /// `f64::MAX` and always fail.
    pub fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> bool {
        let residual = if residual.is_finite() {
            residual.abs()
        } else {
            f64::MAX
        };
        let passed = residual <= tolerance;
        self.all_passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            residual,
            tolerance,
            passed,
        });
        passed
    }

    /// Frobenius distance between two matrices, checked against `tolerance`.
    pub fn check_close(
        &mut self,
        name: impl Into<String>,
        lhs: &ComplexMatrix,
        rhs: &ComplexMatrix,
        tolerance: f64,
    ) -> bool {
        self.check(name, lhs.distance(rhs), tolerance)
    }

    /// Records a boolean claim as a check with residual 0 (holds) or 1
    /// (violated) against tolerance 0.5.
    pub fn check_claim(&mut self, name: impl Into<String>, holds: bool) -> bool {
        self.check(name, if holds { 0.0 } else { 1.0 }, 0.5)
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.skipped.push(Skipped {
            name: name.into(),
            reason: reason.into(),
        });
    }

    pub fn note(&mut self, name: impl Into<String>, value: f64) {
        let value = if value.is_finite() { value } else { f64::MAX };
        self.notes.push(Note {
            name: name.into(),
            value,
        });
    }

    /// Appends the entries of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        let name = |n: String| {
            if prefix.is_empty() {
                n
            } else {
                format!("{prefix}: {n}")
            }
        };
        for c in other.checks {
            self.all_passed &= c.passed;
            self.checks.push(Check {
                name: name(c.name),
                ..c
            });
        }
        for s in other.skipped {
            self.skipped.push(Skipped {
                name: name(s.name),
                ..s
            });
        }
        for n in other.notes {
            self.notes.push(Note {
                name: name(n.name),
                ..n
            });
        }
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Tolerance policy: each check has its own default, which a single global
/// override replaces when set.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tolerance {
    pub global: Option<f64>,
}

impl Tolerance {
    pub fn with_override(tol: f64) -> Self {
        Self { global: Some(tol) }
    }

    pub fn resolve(&self, default: f64) -> f64 {
        self.global.unwrap_or(default)
    }
}

//! Structured verification reports.
//!
//! Every verifier returns a [`VerificationReport`]: an overall verdict plus
//! one [`Check`] row per axiom or sub-condition, carrying the numerical
//! witness (residual, rank, determinant, offending vector) that justified it.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Residual of the identity being tested, when one is meaningful.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// A scalar witness such as a determinant, rank or dimension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Human-readable witness data (offending pair, vector, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            pass: true,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) -> &mut Check {
        self.push(Check {
            name: name.into(),
            pass,
            residual: None,
            value: None,
            detail: None,
        });
        self.checks.last_mut().expect("just pushed")
    }

    /// Record a residual-style check: passes iff `residual <= bound`.
    pub fn residual_check(&mut self, name: impl Into<String>, residual: f64, bound: f64) {
        self.push(Check {
            name: name.into(),
            pass: residual.is_finite() && residual <= bound,
            residual: Some(residual),
            value: None,
            detail: None,
        });
    }

    /// Fold another report in as a named group of checks.
    pub fn absorb(&mut self, sub: VerificationReport) {
        for mut check in sub.checks {
            check.name = format!("{}.{}", sub.name, check.name);
            self.push(check);
        }
    }

    pub fn worst_residual(&self) -> Option<f64> {
        self.checks
            .iter()
            .filter_map(|c| c.residual)
            .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r))))
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl Check {
    pub fn with_residual(&mut self, residual: f64) -> &mut Self {
        self.residual = Some(residual);
        self
    }

    pub fn with_value(&mut self, value: f64) -> &mut Self {
        self.value = Some(value);
        self
    }

    pub fn with_detail(&mut self, detail: impl Into<String>) -> &mut Self {
        self.detail = Some(detail.into());
        self
    }
}

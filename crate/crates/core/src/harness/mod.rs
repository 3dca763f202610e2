//! End-to-end verification procedures producing machine-readable reports.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::comodule::ComoduleError;
use crate::fixtures::{Fixture, FixtureError};
use crate::graded::{AlgebraError, GradedModule};
use crate::homological::HomologicalError;
use crate::linalg::LinalgError;

mod auxiliary;
mod cor1;
mod thm1;
mod thm3;
mod thm4;

pub use auxiliary::{verify_lem1, verify_lem2, verify_lem4_ii};
pub use cor1::{verify_cor1, verify_invariants_identity};
pub use thm1::{verify_thm1, Mode};
pub use thm3::{thm3_verdicts, verify_thm3, Thm3Verdicts};
pub use thm4::verify_thm4;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Homological(#[from] HomologicalError),
    #[error(transparent)]
    Comodule(#[from] ComoduleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error("fixture has no module named {0}")]
    NoModule(String),
    #[error("fixture carries no Galois data")]
    NoGalois,
}

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Window {
    pub n_max: usize,
    pub d_max: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tag: String,
    pub fixture: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    pub field: String,
    pub window: Window,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub checks: Vec<CheckOutcome>,
    pub witnesses: Vec<String>,
    pub hypothesis_violations: Vec<String>,
    /// bidegree tables and other certificate data
    pub data: serde_json::Map<String, serde_json::Value>,
    pub timing_ms: u128,
}

impl VerificationReport {
    pub fn status(&self) -> Status {
        if !self.hypothesis_violations.is_empty() {
            Status::HypothesisFailure
        } else if self.checks.iter().all(|c| c.passed) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Accumulates checks while a verification runs.
pub(crate) struct ReportBuilder {
    report: VerificationReport,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(tag: &str, fx: &Fixture, module: Option<&str>, n_max: usize) -> Self {
        ReportBuilder {
            report: VerificationReport {
                tag: tag.to_string(),
                fixture: fx.id.clone(),
                module: module.map(str::to_string),
                field: fx.algebra().field().to_string(),
                window: Window {
                    n_max,
                    d_max: fx.algebra().top(),
                },
                mode: None,
                checks: Vec::new(),
                witnesses: Vec::new(),
                hypothesis_violations: Vec::new(),
                data: serde_json::Map::new(),
                timing_ms: 0,
            },
            start: Instant::now(),
        }
    }

    pub fn mode(&mut self, mode: &str) {
        self.report.mode = Some(mode.to_string());
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: Option<String>) -> bool {
        if !passed {
            if let Some(d) = &detail {
                self.report.witnesses.push(format!("{name}: {d}"));
            }
        }
        self.report.checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            detail,
        });
        passed
    }

    pub fn hypothesis(&mut self, violation: String) {
        self.report.hypothesis_violations.push(violation);
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        self.report
            .data
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn finish(mut self) -> VerificationReport {
        self.report.timing_ms = self.start.elapsed().as_millis();
        self.report
    }
}

pub(crate) fn module<'a>(fx: &'a Fixture, name: &str) -> Result<&'a GradedModule> {
    fx.module(name).ok_or_else(|| HarnessError::NoModule(name.to_string()))
}

pub(crate) fn galois(fx: &Fixture) -> Result<&crate::comodule::GaloisData> {
    fx.galois.as_ref().ok_or(HarnessError::NoGalois)
}

/// Standing hypotheses on `H`, recorded as violations rather than failures.
pub(crate) fn require_hopf(b: &mut ReportBuilder, fx: &Fixture, semisimple: bool, cosemisimple: bool) {
    let h = fx.hopf();
    if semisimple && !h.is_semisimple().unwrap_or(false) {
        b.hypothesis("H is not semisimple".into());
    }
    if cosemisimple && !h.is_cosemisimple().unwrap_or(false) {
        b.hypothesis("H is not cosemisimple".into());
    }
}

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// holds after a recorded calibration: a loop ordering, a branch sign
    /// or a corrected convention; the details say which
    Calibrated,
}

impl Status {
    pub fn ok(self) -> bool {
        self != Status::Fail
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Calibrated => "calibrated",
        })
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    /// the claim being checked, in words
    pub reference: String,
    pub status: Status,
    pub details: Value,
    pub runtime_seconds: f64,
}

impl VerificationReport {
    /// Time `f` and wrap its `(status, details)`; errors become failures.
    pub fn run(
        name: &str,
        reference: &str,
        f: impl FnOnce() -> anyhow::Result<(Status, Value)>,
    ) -> VerificationReport {
        let start = Instant::now();
        let (status, details) = match f() {
            Ok(r) => r,
            Err(e) => (Status::Fail, serde_json::json!({ "error": format!("{e:#}") })),
        };
        VerificationReport {
            name: name.into(),
            reference: reference.into(),
            status,
            details,
            runtime_seconds: start.elapsed().as_secs_f64(),
        }
    }
}

/// Reports of a full run, sorted by check name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: Config,
    pub checks: Vec<VerificationReport>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(config: Config, mut checks: Vec<VerificationReport>) -> RunReport {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().all(|c| c.status.ok());
        RunReport { config, checks, passed }
    }

    pub fn get(&self, name: &str) -> Option<&VerificationReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<RunReport> {
        serde_json::from_str(s)
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<22} {:<11} {:>9.3}s  {}\n", c.name, c.status, c.runtime_seconds, c.reference));
        }
        out.push_str(if self.passed { "all checks passed\n" } else { "some checks FAILED\n" });
        out
    }
}

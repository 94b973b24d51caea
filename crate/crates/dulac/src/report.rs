//! The deterministic JSON report emitted by every command: a command echo,
//! the canonical-form outputs, the per-check verdicts with first-failure
//! details, and an overall status that fixes the process exit code.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const ENGINE: &str = concat!("dulac ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    InputError,
}

/// One named output: the value is a string in canonical text form, a
/// number, or an array of such.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputItem {
    pub name: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub verdict: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub engine: String,
    pub degree: u32,
    pub outputs: Vec<OutputItem>,
    pub checks: Vec<CheckItem>,
    pub status: Status,
}

impl Report {
    #[must_use]
    pub fn new(command: &str, degree: u32) -> Report {
        Report {
            command: command.to_string(),
            engine: ENGINE.to_string(),
            degree,
            outputs: Vec::new(),
            checks: Vec::new(),
            status: Status::Pass,
        }
    }

    /// A report that never ran the engine: one diagnostic, input-error
    /// status.
    #[must_use]
    pub fn input_error(command: &str, degree: u32, detail: &str) -> Report {
        let mut r = Report::new(command, degree);
        r.checks.push(CheckItem {
            name: "input".to_string(),
            verdict: Status::InputError,
            detail: Some(detail.to_string()),
        });
        r.status = Status::InputError;
        r
    }

    pub fn output(&mut self, name: &str, value: Value) {
        self.outputs.push(OutputItem {
            name: name.to_string(),
            value,
        });
    }

    /// Records a verdict and folds it into the overall status: any failure
    /// makes the report fail, an inconclusive check degrades a passing
    /// report.
    pub fn check(&mut self, name: &str, verdict: Status, detail: Option<String>) {
        self.checks.push(CheckItem {
            name: name.to_string(),
            verdict,
            detail,
        });
        self.status = match (self.status, verdict) {
            (Status::InputError, _) | (_, Status::InputError) => Status::InputError,
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        };
    }

    #[must_use]
    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
            Status::InputError => 3,
        }
    }
}

/// The canonical byte form: pretty JSON with a trailing newline. Two runs
/// on identical input produce identical bytes.
#[must_use]
pub fn render_report(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("plain data serializes");
    out.push('\n');
    out
}

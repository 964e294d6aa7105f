//! The report envelope written by every subcommand.

use std::io::Write;
use std::path::{Path, PathBuf};

use rbgroup::naming::{fingerprint, Fingerprint};
use rbgroup::{Caps, Error, FiniteGroup};
use serde::Serialize;
use serde_json::{json, Value};

/// Everything that determines a run's output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub threads: usize,
    pub seed: u64,
    pub caps: Caps,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Negative,
    InputError,
    ResourceCap,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::InputError => 2,
            Status::ResourceCap => 3,
        }
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            e if e.is_resource() => Status::ResourceCap,
            Error::NotRotaBaxter { .. }
            | Error::NotHomomorphism(..)
            | Error::Hypothesis(_)
            | Error::Property { .. }
            | Error::NotNormal(_) => Status::Negative,
            _ => Status::InputError,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    #[serde(rename = "ref")]
    pub reference: String,
    pub order: usize,
    pub fingerprint: Fingerprint,
}

impl GroupSummary {
    pub fn new(reference: &str, g: &FiniteGroup) -> Self {
        GroupSummary { reference: reference.to_string(), order: g.order(), fingerprint: fingerprint(g) }
    }
}

/// The outcome of a subcommand before it is wrapped.
pub struct Outcome {
    pub status: Status,
    pub group: Option<GroupSummary>,
    pub result: Value,
}

impl Outcome {
    pub fn ok(group: Option<GroupSummary>, result: Value) -> Self {
        Outcome { status: Status::Ok, group, result }
    }

    pub fn error(e: &Error) -> Self {
        let mut result = json!({ "error": e.to_string() });
        if let Error::OutOfDeskScale(subject, reason) = e {
            result["declaration"] = json!({ "subject": subject, "status": "out of desk scale", "reason": reason });
        }
        Outcome { status: Status::of_error(e), group: None, result }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<&'a GroupSummary>,
    result: &'a Value,
}

pub fn render(command: &str, config: &RunConfig, outcome: &Outcome) -> String {
    let envelope = Envelope {
        tool: "rbgroup",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        status: outcome.status,
        group: outcome.group.as_ref(),
        result: &outcome.result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("reports serialize");
    text.push('\n');
    text
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

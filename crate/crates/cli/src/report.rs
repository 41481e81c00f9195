use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Outcome of a subcommand that ran to completion.
pub struct Outcome {
    pub passed: bool,
    pub payload: Value,
}

impl Outcome {
    pub fn pass(payload: Value) -> Self {
        Outcome { passed: true, payload }
    }

    pub fn check(passed: bool, payload: Value) -> Self {
        Outcome { passed, payload }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: &'static str,
    pub path: String,
    pub sha256: String,
}

/// Reads input files and remembers their digests for the report.
#[derive(Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, role: &'static str, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read {role} file {}", path.display()))?;
        self.digests.push(InputDigest {
            role,
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{role} file {} is not UTF-8", path.display()))
    }
}

#[derive(Serialize)]
struct CommandLine<'a> {
    name: &'a str,
    flags: &'a Value,
}

#[derive(Serialize)]
struct Timing {
    wall_seconds: f64,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: CommandLine<'a>,
    status: &'static str,
    inputs: &'a [InputDigest],
    payload: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

pub fn render(
    name: &str,
    flags: &Value,
    inputs: &Inputs,
    passed: bool,
    payload: &Value,
    started: Option<Instant>,
) -> String {
    let report = RunReport {
        command: CommandLine { name, flags },
        status: if passed { "pass" } else { "fail" },
        inputs: &inputs.digests,
        payload,
        timing: started.map(|t| Timing { wall_seconds: t.elapsed().as_secs_f64() }),
    };
    serde_json::to_string_pretty(&report).expect("report serializes")
}

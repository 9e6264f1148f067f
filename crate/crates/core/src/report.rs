//! The machine-readable report document every CLI command can emit.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A checked statement failed on inputs satisfying its hypotheses, or
    /// the input is not a Lie algebra.
    Violation,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub command: String,
    pub inputs_digest: String,
    pub status: Status,
    pub results: serde_json::Value,
    pub tool_version: &'static str,
}

impl ReportDocument {
    pub fn new(command: &str, inputs: &[String], status: Status, results: serde_json::Value) -> Self {
        ReportDocument {
            schema: SCHEMA,
            command: command.to_string(),
            inputs_digest: inputs_digest(inputs),
            status,
            results,
            tool_version: TOOL_VERSION,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// SHA-256 over the inputs, each terminated by a newline.
pub fn inputs_digest(inputs: &[String]) -> String {
    let mut hasher = Sha256::new();
    for part in inputs {
        hasher.update(part.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

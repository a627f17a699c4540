//! The JSON document every non-table command prints.

use serde::Serialize;
use serde_json::Value;

/// Bumped on any breaking change to a record's fields.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
}

impl OutputRecord {
    pub fn new(command: &'static str, inputs: Value, result: Value) -> Self {
        Self { schema_version: SCHEMA_VERSION, command, inputs, result, trace: None }
    }

    pub fn print(&self) {
        emit(&format!("{}\n", serde_json::to_string_pretty(self).expect("records serialize")));
    }
}

/// Writes to stdout, ignoring a closed pipe.
pub fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

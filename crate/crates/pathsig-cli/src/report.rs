//! JSON report assembly: every run echoes the tool version, the resolved
//! configuration, and a digest of each input file.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

pub struct ReportBuilder {
    command: &'static str,
    config: Value,
    inputs: Vec<Value>,
}

impl ReportBuilder {
    pub fn new(command: &'static str, config: Value) -> Self {
        Self {
            command,
            config,
            inputs: Vec::new(),
        }
    }

    /// Record an input file together with its SHA-256 digest.
    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(json!({
            "path": path.display().to_string(),
            "sha256": hex,
        }));
    }

    /// Final report: the envelope plus command-specific payload fields.
    pub fn finish(self, payload: Value) -> Value {
        let mut root = Map::new();
        root.insert(
            "tool".into(),
            json!({ "name": "pathsig", "version": env!("CARGO_PKG_VERSION") }),
        );
        root.insert("command".into(), Value::String(self.command.into()));
        root.insert("config".into(), self.config);
        root.insert("inputs".into(), Value::Array(self.inputs));
        if let Value::Object(fields) = payload {
            for (k, v) in fields {
                root.insert(k, v);
            }
        }
        Value::Object(root)
    }
}

/// Read a file, classifying failures as usage errors.
pub fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Serialize the report to `--output` or stdout.
pub fn emit(report: &Value, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Numeric(format!("report serialization failed: {e}")))?;
    match output {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Word-keyed coefficient mapping in storage order.
pub fn coefficient_map(pairs: Vec<(String, f64)>) -> Value {
    let mut map = Map::new();
    for (word, value) in pairs {
        map.insert(word, json!(value));
    }
    Value::Object(map)
}

//! Machine-readable reports: canonical JSON with sorted keys and no floats.
//! Timing never enters a report; commands print it to stderr instead.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::scenario::{ConfigError, Scenario};

/// A deterministic report: command echo, scenario digest, and the
/// command-specific results.
pub struct Report {
    pub command: String,
    pub scenario_digest: String,
    pub scenario_canonical: String,
    pub results: Value,
}

impl Report {
    pub fn new(command: &str, scenario: &Scenario, results: Value) -> Self {
        Report {
            command: command.to_string(),
            scenario_digest: scenario.digest(),
            scenario_canonical: scenario.canonical(),
            results,
        }
    }

    /// The canonical byte form: serde_json object maps are sorted, structs
    /// are converted through `Value`, and integers are the only numbers.
    pub fn to_bytes(&self) -> Vec<u8> {
        let value = json!({
            "command": self.command,
            "scenario_digest": self.scenario_digest,
            "scenario": self.scenario_canonical,
            "results": self.results,
        });
        let mut bytes = serde_json::to_vec_pretty(&value).expect("reports are valid JSON");
        bytes.push(b'\n');
        bytes
    }

    /// Writes the report to the given path, or to stdout when none.
    pub fn write(&self, out: Option<&Path>) -> Result<(), ConfigError> {
        let bytes = self.to_bytes();
        match out {
            Some(path) => std::fs::write(path, &bytes)
                .map_err(|e| ConfigError::new(format!("writing {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| ConfigError::new(format!("writing stdout: {e}"))),
        }
    }
}

/// Converts any serializable artifact into a sorted-key JSON value.
pub fn to_value<T: serde::Serialize>(artifact: &T) -> Value {
    serde_json::to_value(artifact).expect("artifacts are valid JSON")
}

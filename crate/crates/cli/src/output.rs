//! Machine-readable output envelope shared by all subcommands.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use cosign_core::ExactRational;

/// Envelope for `--json` output: the command, an echo of its parsed inputs,
/// the result payload, and execution metadata.
#[derive(Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub metadata: Metadata,
}

#[derive(Serialize)]
pub struct Metadata {
    pub engine: String,
    pub wall_time: f64,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: Value, result: Value, engine: &str, started: Instant) -> Self {
        OutputRecord {
            command: command.to_string(),
            inputs,
            result,
            metadata: Metadata {
                engine: engine.to_string(),
                wall_time: started.elapsed().as_secs_f64(),
            },
        }
    }

    pub fn print(&self) {
        println!("{}", serde_json::to_string(self).expect("serializable"));
    }
}

/// A rational as {num, den, decimal}: exact decimal digit strings plus an
/// advisory 12-digit approximation.
pub fn rational_json(r: &ExactRational) -> Value {
    json!({
        "num": r.numer_string(),
        "den": r.denom_string(),
        "decimal": r.decimal_string(12),
    })
}

pub fn approx(r: &ExactRational) -> String {
    format!("{} \u{2248} {}", r, r.decimal_string(12))
}

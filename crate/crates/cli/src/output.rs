//! Output envelope and its two renderings.

use std::io::Write;
use std::process::ExitCode;

use clap::ValueEnum;
use serde_json::{json, Value};

use crate::Failure;

pub const FORMAT_VERSION: &str = "1";

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub command: &'static str,
    pub inputs: Value,
    pub result: Value,
    pub timing_ns: u64,
}

impl Envelope {
    pub fn new(command: &'static str, inputs: Value, result: Value, timing_ns: u64) -> Self {
        Envelope {
            command,
            inputs,
            result,
            timing_ns,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": FORMAT_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "timing_ns": self.timing_ns,
        })
    }

    pub fn print(&self, format: Format) {
        let v = self.to_json();
        let text = match format {
            Format::Json => serde_json::to_string_pretty(&v).expect("envelope serializes"),
            Format::Text => {
                let mut lines = Vec::new();
                flatten("", &v, &mut lines);
                lines.join("\n")
            }
        };
        emit(&text);
    }
}

// A closed pipe (e.g. `| head`) is not an error worth a panic.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

/// One `path: value` line per leaf; arrays of scalars stay on one line.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        _ => out.push(format!("{prefix}: {v}")),
    }
}

pub fn fail(format: Format, command: &str, f: &Failure) -> ExitCode {
    match format {
        Format::Json => {
            let v = json!({
                "version": FORMAT_VERSION,
                "command": command,
                "error": {"kind": f.kind, "message": f.message, "exit_code": f.code},
            });
            emit(&serde_json::to_string_pretty(&v).expect("error serializes"));
        }
        Format::Text => eprintln!("error ({}): {}", f.kind, f.message),
    }
    ExitCode::from(f.code)
}

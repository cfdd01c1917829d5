use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// What produced an output file. Deliberately free of timestamps and host
/// details so that repeated runs are byte-identical.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub version: &'static str,
    pub inputs: Vec<Input>,
    pub config: Value,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct Input {
    pub role: &'static str,
    pub source: String,
}

impl Input {
    pub fn file(role: &'static str, path: &Path) -> Self {
        Self { role, source: path.display().to_string() }
    }

    pub fn builtin(role: &'static str, name: &str) -> Self {
        Self { role, source: format!("builtin:{name}") }
    }
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            inputs: Vec::new(),
            config: Value::Null,
            seed: None,
            output: None,
        }
    }
}

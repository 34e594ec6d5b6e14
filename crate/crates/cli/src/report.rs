//! Report plumbing: every subcommand emits exactly one JSON document.
//!
//! Reports carry a `schema` tag and the configuration that produced them, and
//! contain nothing volatile (no timestamps, no absolute paths), so a fixed
//! seed yields byte-identical output run over run.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// Version tag stamped on every report.
pub const SCHEMA: u32 = 1;

/// Exit code for a clean run.
pub const EXIT_OK: i32 = 0;
/// Exit code when a verified property actually failed.
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
/// Exit code for unusable invocations; clap uses the same value for parse errors.
pub const EXIT_USAGE: i32 = 2;

/// One named property check inside a verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// How many instances the check examined.
    pub samples: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str, samples: usize, failures: usize) -> Self {
        CheckResult { name: name.to_string(), samples, failures, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Serializes a report, prints it to stdout, and mirrors it to `out` if given.
pub fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Result<()> {
    let mut body = serde_json::to_string_pretty(report).context("serializing report")?;
    body.push('\n');
    print!("{body}");
    if let Some(path) = out {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Exit code implied by a failure count.
pub fn exit_for(failures: usize) -> i32 {
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_PROPERTY_FAILURE
    }
}

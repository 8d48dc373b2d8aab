//! JSON and CSV artifact writers. Every JSON artifact embeds the resolved
//! config and the tool version so runs are reproducible from the artifact
//! alone.

use crate::config::RunConfig;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Envelope around a payload: tool, seed, resolved config, payload.
#[derive(Debug, Clone, Serialize)]
pub struct Artifact<'a, T: Serialize> {
    pub tool: ToolInfo,
    pub seed: u64,
    pub config: &'a RunConfig,
    pub payload: T,
}

impl<'a, T: Serialize> Artifact<'a, T> {
    pub fn new(config: &'a RunConfig, payload: T) -> Self {
        Self {
            tool: ToolInfo::current(),
            seed: config.seed,
            config,
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serialization")
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }
}

/// CSV writer with a fixed header; cells are written with enough digits to
/// round-trip f64.
pub fn write_csv<W: Write>(
    mut out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> std::io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.17e}")
    }
}

//! Artifact envelope and where artifacts go.

use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use pairrank_core::{Mechanism, TiePolicy, SCHEMA_VERSION};
use serde::Serialize;

use crate::args::Format;

/// Bad flag combinations that clap cannot express.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

/// Everything needed to rerun an invocation. Thread count is left out since
/// it never changes results.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub inputs: Vec<String>,
    pub mechanisms: Vec<Mechanism>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub tie_policy: TiePolicy,
    pub seed: u64,
    pub out_dir: Option<String>,
    pub format: Format,
    /// Subcommand-specific settings.
    pub options: serde_json::Value,
}

#[derive(Serialize)]
struct Artifact<'a, T> {
    schema_version: u32,
    tool: &'static str,
    tool_version: &'static str,
    run_config: &'a RunConfig,
    result: &'a T,
}

pub fn json_artifact<T: Serialize>(cfg: &RunConfig, result: &T) -> Result<String> {
    let artifact = Artifact {
        schema_version: SCHEMA_VERSION,
        tool: "pairrank",
        tool_version: env!("CARGO_PKG_VERSION"),
        run_config: cfg,
        result,
    };
    let mut s = serde_json::to_string_pretty(&artifact).context("serializing result")?;
    s.push('\n');
    Ok(s)
}

fn config_line(cfg: &RunConfig) -> Result<String> {
    let json = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "pairrank",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "run_config": cfg,
    });
    serde_json::to_string(&json).context("serializing run config")
}

/// CSV body preceded by a `# run_config: {...}` comment line.
pub fn csv_artifact(cfg: &RunConfig, body: &str) -> Result<String> {
    Ok(format!("# run_config: {}\n{body}", config_line(cfg)?))
}

/// SVG with the run config in a leading XML comment.
pub fn svg_artifact(cfg: &RunConfig, svg: &str) -> Result<String> {
    let line = config_line(cfg)?.replace("--", "- -");
    Ok(format!("<!-- run_config: {line} -->\n{svg}"))
}

pub fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn print(contents: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(contents.as_bytes()).context("writing to stdout")?;
    out.flush().context("writing to stdout")
}

/// Prints to stdout, or writes `<dir>/<stem>.<ext>` when an output directory is set.
pub fn emit(out: Option<&PathBuf>, stem: &str, format: Format, contents: &str) -> Result<()> {
    match out {
        Some(dir) => {
            create_dir(dir)?;
            write_file(&dir.join(format!("{stem}.{}", format.extension())), contents)
        }
        None => print(contents),
    }
}

/// Left-aligned plain-text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  "));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Path as given on the command line, for run configs.
pub fn shown(p: &Path) -> String {
    p.display().to_string()
}

//! Output artifacts: per-run and aggregate CSVs, a per-run final pull-count
//! CSV, and a manifest that records the resolved config plus a SHA-256 hash
//! of every data file.
//!
//! Floats are written as `{:.16e}` (17 significant digits), which
//! round-trips every finite f64 bit-exactly; files are newline-terminated
//! and fields are RFC-4180 quoted when they need to be.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::ExperimentConfig;
use crate::harness::{AggregateRecord, ExperimentResult, RunRecord};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
}

/// Column layout shared by every run-level CSV.
pub const RUNS_HEADER: &str =
    "policy,run,checkpoint_t,modulated_reward,raw_reward,expected_regret,oracle_agreement_rate";

pub const AGGREGATE_HEADER: &str = "policy,checkpoint_t,\
mean_modulated_reward,std_modulated_reward,\
mean_raw_reward,std_raw_reward,\
mean_expected_regret,std_expected_regret,\
mean_oracle_agreement_rate,std_oracle_agreement_rate";

pub const COUNTS_HEADER: &str = "policy,run,arm,count";

/// Formats a float with 17 significant digits so parsing recovers the exact
/// bit pattern.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Minimal RFC-4180 reader: quoted fields, doubled quotes, LF or CRLF rows.
pub fn parse_csv(text: &str) -> Result<Vec<Vec<String>>, OutputError> {
    let mut rows = Vec::new();
    let mut row: Vec<String> = Vec::new();
    let mut field = String::new();
    let mut chars = text.chars().peekable();
    let mut in_quotes = false;
    let mut any = false;
    while let Some(c) = chars.next() {
        any = true;
        if in_quotes {
            match c {
                '"' => {
                    if chars.peek() == Some(&'"') {
                        chars.next();
                        field.push('"');
                    } else {
                        in_quotes = false;
                    }
                }
                _ => field.push(c),
            }
            continue;
        }
        match c {
            '"' if field.is_empty() => in_quotes = true,
            '"' => return Err(OutputError::MalformedCsv("stray quote mid-field".into())),
            ',' => row.push(std::mem::take(&mut field)),
            '\r' => {
                if chars.peek() == Some(&'\n') {
                    chars.next();
                }
                row.push(std::mem::take(&mut field));
                rows.push(std::mem::take(&mut row));
            }
            '\n' => {
                row.push(std::mem::take(&mut field));
                rows.push(std::mem::take(&mut row));
            }
            _ => field.push(c),
        }
    }
    if in_quotes {
        return Err(OutputError::MalformedCsv("unterminated quoted field".into()));
    }
    if any && (!field.is_empty() || !row.is_empty()) {
        // Final row without a trailing newline.
        row.push(field);
        rows.push(row);
    }
    Ok(rows)
}

/// One run-level CSV row, parsed back into numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub policy: String,
    pub run: u32,
    pub checkpoint_t: u64,
    pub modulated_reward: f64,
    pub raw_reward: f64,
    pub expected_regret: f64,
    pub oracle_agreement_rate: f64,
}

/// Parses the content of a `runs.csv`, header included.
pub fn parse_runs_csv(text: &str) -> Result<Vec<RunRow>, OutputError> {
    let rows = parse_csv(text)?;
    let mut out = Vec::new();
    let mut iter = rows.into_iter();
    match iter.next() {
        Some(header) if header.join(",") == RUNS_HEADER => {}
        other => {
            return Err(OutputError::MalformedCsv(format!(
                "unexpected header: {other:?}"
            )))
        }
    }
    for row in iter {
        if row.len() != 7 {
            return Err(OutputError::MalformedCsv(format!(
                "expected 7 fields, got {}",
                row.len()
            )));
        }
        let num = |i: usize| -> Result<f64, OutputError> {
            row[i]
                .parse()
                .map_err(|e| OutputError::MalformedCsv(format!("field {i}: {e}")))
        };
        out.push(RunRow {
            policy: row[0].clone(),
            run: row[1]
                .parse()
                .map_err(|e| OutputError::MalformedCsv(format!("run index: {e}")))?,
            checkpoint_t: row[2]
                .parse()
                .map_err(|e| OutputError::MalformedCsv(format!("checkpoint: {e}")))?,
            modulated_reward: num(3)?,
            raw_reward: num(4)?,
            expected_regret: num(5)?,
            oracle_agreement_rate: num(6)?,
        });
    }
    Ok(out)
}

pub fn render_runs_csv(runs: &[RunRecord]) -> String {
    let mut out = String::from(RUNS_HEADER);
    out.push('\n');
    for run in runs {
        for row in &run.checkpoints {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                quote(&run.policy),
                run.run_index,
                row.t,
                format_f64(row.modulated_reward),
                format_f64(row.raw_reward),
                format_f64(row.expected_regret),
                format_f64(row.oracle_agreement_rate),
            );
        }
    }
    out
}

pub fn render_aggregate_csv(aggregates: &[AggregateRecord]) -> String {
    let mut out = String::from(AGGREGATE_HEADER);
    out.push('\n');
    for agg in aggregates {
        for row in &agg.checkpoints {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                quote(&agg.policy),
                row.t,
                format_f64(row.mean_modulated),
                format_f64(row.std_modulated),
                format_f64(row.mean_raw),
                format_f64(row.std_raw),
                format_f64(row.mean_regret),
                format_f64(row.std_regret),
                format_f64(row.mean_agreement),
                format_f64(row.std_agreement),
            );
        }
    }
    out
}

pub fn render_counts_csv(runs: &[RunRecord]) -> String {
    let mut out = String::from(COUNTS_HEADER);
    out.push('\n');
    for run in runs {
        for (arm, count) in run.final_counts.iter().enumerate() {
            let _ = writeln!(out, "{},{},{arm},{count}", quote(&run.policy), run.run_index);
        }
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex::encode(hasher.finalize())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

/// Self-describing record of one experiment invocation: which tool produced
/// it, the fully resolved config, and content hashes of every data file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub tool: ToolInfo,
    pub config: ExperimentConfig,
    pub files: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(config: ExperimentConfig, files: BTreeMap<String, String>) -> Self {
        Self {
            tool: ToolInfo {
                name: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            config,
            files,
        }
    }
}

/// Writes `runs.csv`, `aggregate.csv`, `counts.csv` and `manifest.json`
/// into `out_dir` (created if missing) and returns the paths in that order.
///
/// The manifest stores the *resolved* form of `cfg`.
pub fn write_outputs(
    result: &ExperimentResult,
    cfg: &ExperimentConfig,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, OutputError> {
    std::fs::create_dir_all(out_dir).map_err(|source| OutputError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let rendered = [
        ("runs.csv", render_runs_csv(&result.runs)),
        ("aggregate.csv", render_aggregate_csv(&result.aggregates)),
        ("counts.csv", render_counts_csv(&result.runs)),
    ];
    let mut paths = Vec::new();
    let mut hashes = BTreeMap::new();
    for (name, content) in &rendered {
        let path = out_dir.join(name);
        std::fs::write(&path, content).map_err(|source| OutputError::Io {
            path: path.display().to_string(),
            source,
        })?;
        hashes.insert(name.to_string(), sha256_hex(content.as_bytes()));
        paths.push(path);
    }
    let manifest = Manifest::new(cfg.resolved(), hashes);
    let mut json =
        serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
    json.push('\n');
    let path = out_dir.join("manifest.json");
    std::fs::write(&path, &json).map_err(|source| OutputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    paths.push(path);
    Ok(paths)
}

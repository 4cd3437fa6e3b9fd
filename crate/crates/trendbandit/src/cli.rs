//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage/config problems, 2 for runtime
//! domain errors (e.g. a trend that overflows inside the configured range).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::config::{ConfigError, ExperimentConfig, PolicySpec};
use crate::harness::{run_experiment, RunError};
use crate::oracle::{expected_regret, greedy_oracle, regret_bound, OracleError};
use crate::output::{write_outputs, OutputError};
use crate::trend::TrendError;

/// Environment variable consulted for the output directory when `--out-dir`
/// is absent.
pub const OUT_DIR_ENV: &str = "TRENDBANDIT_OUT_DIR";

const USAGE: &str = "\
usage: trendbandit <command> [options]

commands:
  run     --config <file> [--out-dir <dir>] [--seed <n>] [--policies <list>]
          simulate every configured policy and write CSV artifacts
  oracle  --config <file>
          print the greedy oracle schedule and its expected gain
  bound   --config <file> --counts <c0,c1,...>
          evaluate the logarithmic regret bound for observed pull counts
  trend   --config <file> --max-n <n>
          tabulate the trend D(n) and its running sum F(n)

options:
  --out-dir    output directory; defaults to $TRENDBANDIT_OUT_DIR, then \"out\"
  --seed       overrides the config's master seed
  --policies   overrides the config's policy list; comma-separated
               name[:key=value]* items, e.g. \"aucb,exp3:gamma=0.2\"
";

#[derive(Debug)]
enum CliError {
    Usage(String),
    Config(ConfigError),
    Run(RunError),
    Oracle(OracleError),
    Output(OutputError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Run(e) => write!(f, "{e}"),
            CliError::Oracle(e) => write!(f, "{e}"),
            CliError::Output(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Config(e) => config_exit_code(e),
            CliError::Run(RunError::Config(e)) => config_exit_code(e),
            CliError::Run(_) | CliError::Oracle(_) | CliError::Output(_) => 2,
        }
    }
}

/// A config whose trend formula leaves f64 inside its own declared range is
/// a domain problem, not a usage problem.
fn config_exit_code(e: &ConfigError) -> i32 {
    match e {
        ConfigError::Trend(TrendError::NonFinite { .. }) => 2,
        _ => 1,
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        CliError::Run(e)
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Oracle(e)
    }
}

impl From<OutputError> for CliError {
    fn from(e: OutputError) -> Self {
        CliError::Output(e)
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("\n{USAGE}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(args: &[String]) -> Result<(), CliError> {
    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("oracle") => cmd_oracle(&args[1..]),
        Some("bound") => cmd_bound(&args[1..]),
        Some("trend") => cmd_trend(&args[1..]),
        Some("help") | Some("--help") | Some("-h") => {
            println!("{USAGE}");
            Ok(())
        }
        Some(other) => Err(CliError::Usage(format!("unknown command \"{other}\""))),
        None => Err(CliError::Usage("no command given".into())),
    }
}

/// Collects `--flag value` pairs, rejecting anything not in `allowed`.
fn take_flags(args: &[String], allowed: &[&str]) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    let mut i = 0;
    while i < args.len() {
        let flag = &args[i];
        if !allowed.contains(&flag.as_str()) {
            return Err(CliError::Usage(format!("unknown argument \"{flag}\"")));
        }
        let value = args
            .get(i + 1)
            .ok_or_else(|| CliError::Usage(format!("{flag} needs a value")))?;
        let key = flag.trim_start_matches("--").to_string();
        if out.insert(key, value.clone()).is_some() {
            return Err(CliError::Usage(format!("{flag} given twice")));
        }
        i += 2;
    }
    Ok(out)
}

fn required<'a>(
    flags: &'a BTreeMap<String, String>,
    key: &str,
) -> Result<&'a str, CliError> {
    flags
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| CliError::Usage(format!("--{key} is required")))
}

fn load_config(flags: &BTreeMap<String, String>) -> Result<ExperimentConfig, CliError> {
    let path = required(flags, "config")?;
    Ok(ExperimentConfig::load(Path::new(path))?)
}

/// Parses a `--policies` override: comma-separated `name[:key=value]*`.
fn parse_policy_list(list: &str) -> Result<Vec<PolicySpec>, CliError> {
    list.split(',')
        .map(|item| {
            let mut parts = item.split(':');
            let name = parts.next().unwrap_or_default().trim();
            if name.is_empty() {
                return Err(CliError::Usage(format!("empty policy name in \"{item}\"")));
            }
            let mut params = BTreeMap::new();
            for kv in parts {
                let (key, value) = kv.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("expected key=value after \"{name}:\", got \"{kv}\""))
                })?;
                let value: f64 = value.trim().parse().map_err(|e| {
                    CliError::Usage(format!("policy parameter \"{key}\": {e}"))
                })?;
                params.insert(key.trim().to_string(), value);
            }
            Ok(PolicySpec {
                name: name.to_string(),
                params,
            })
        })
        .collect()
}

fn parse_counts(list: &str) -> Result<Vec<u64>, CliError> {
    list.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("count \"{tok}\": {e}")))
        })
        .collect()
}

fn resolve_out_dir(flags: &BTreeMap<String, String>) -> PathBuf {
    if let Some(dir) = flags.get("out-dir") {
        return PathBuf::from(dir);
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from("out")
}

fn cmd_run(args: &[String]) -> Result<(), CliError> {
    let flags = take_flags(args, &["--config", "--out-dir", "--seed", "--policies"])?;
    let mut cfg = load_config(&flags)?;
    if let Some(seed) = flags.get("seed") {
        cfg.master_seed = seed
            .parse()
            .map_err(|e| CliError::Usage(format!("--seed: {e}")))?;
    }
    if let Some(list) = flags.get("policies") {
        cfg.policies = parse_policy_list(list)?;
    }
    let out_dir = resolve_out_dir(&flags);

    let result = run_experiment(&cfg)?;
    let paths = write_outputs(&result, &cfg, &out_dir)?;

    if !cfg.scenario.is_empty() {
        println!("scenario: {}", cfg.scenario);
    }
    println!(
        "ran {} policies × {} runs × {} steps (seed {})",
        cfg.policies.len(),
        cfg.runs,
        cfg.horizon,
        cfg.master_seed
    );
    println!("oracle gain: {}", result.oracle.gain);
    for path in &paths {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_oracle(args: &[String]) -> Result<(), CliError> {
    let flags = take_flags(args, &["--config"])?;
    let cfg = load_config(&flags)?;
    cfg.validate()?;
    let trend = cfg.build_trend()?;
    let oracle = greedy_oracle(&cfg.means, &trend, cfg.horizon)?;
    println!("horizon: {}", oracle.horizon);
    println!("expected gain: {}", oracle.gain);
    for (arm, (&count, &mean)) in oracle.counts.iter().zip(&cfg.means).enumerate() {
        println!("arm {arm}: mean {mean}, oracle pulls {count}");
    }
    Ok(())
}

fn cmd_bound(args: &[String]) -> Result<(), CliError> {
    let flags = take_flags(args, &["--config", "--counts"])?;
    let cfg = load_config(&flags)?;
    cfg.validate()?;
    let counts = parse_counts(required(&flags, "counts")?)?;
    if counts.len() != cfg.arm_count() {
        return Err(CliError::Usage(format!(
            "--counts needs {} entries (one per arm), got {}",
            cfg.arm_count(),
            counts.len()
        )));
    }
    let trend = cfg.build_trend()?;
    let oracle = greedy_oracle(&cfg.means, &trend, cfg.horizon)?;
    let report = regret_bound(&cfg.means, &trend, &oracle, &counts)?;
    for (arm, gap) in report.gaps.iter().enumerate() {
        let tag = if report.contributing_arms.contains(&arm) {
            " (contributing)"
        } else {
            ""
        };
        println!("arm {arm}: effective gap {gap}{tag}");
    }
    match report.bound {
        Some(bound) => println!("bound: {bound}"),
        None => println!("bound: undefined (a contributing arm has a non-positive gap)"),
    }
    // When the counts cover the whole horizon, report the realised regret
    // they imply next to the bound.
    if counts.iter().sum::<u64>() == cfg.horizon {
        let report = expected_regret(&counts, &cfg.means, &trend, &oracle)?;
        println!("expected regret of these counts: {}", report.regret);
    }
    Ok(())
}

fn cmd_trend(args: &[String]) -> Result<(), CliError> {
    let flags = take_flags(args, &["--config", "--max-n"])?;
    let cfg = load_config(&flags)?;
    cfg.validate()?;
    let max_n: u64 = required(&flags, "max-n")?
        .parse()
        .map_err(|e| CliError::Usage(format!("--max-n: {e}")))?;
    if max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let trend = cfg.build_trend()?;
    println!("n,trend,cumulative");
    for n in 1..=max_n {
        println!("{n},{},{}", trend.eval(n), trend.cumulative(n));
    }
    Ok(())
}

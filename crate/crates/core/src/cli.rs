//! Batch front end: `run`, `sweep` and `validate`.
//!
//! Scenario files are JSON (see [`crate::scenario::ScenarioConfig`]).
//! `--override KEY=VALUE` edits the parsed document before validation:
//! `KEY` is a dotted path (`run.mc_runs`, `network.nodes.0.pd0`) and `VALUE`
//! is read as JSON when it parses and as a string otherwise.
//!
//! Exit codes: 0 success, 1 output could not be written, 2 configuration
//! error, 3 numeric failure during the run.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::metrics::Summary;
use crate::scenario::{run_experiment, ScenarioConfig};

#[derive(Debug, Parser)]
#[command(name = "mosaic", version, about = "Distributed multi-target tracking experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the Monte Carlo protocol of a scenario.
    Run(RunArgs),
    /// Repeat `run` for each value of one parameter.
    Sweep(SweepArgs),
    /// Check a scenario without running it.
    Validate(ConfigArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Scenario file.
    #[arg(long)]
    pub config: PathBuf,
    /// `KEY=VALUE` edit applied to the scenario (repeatable).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Replaces `run.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Output directory.
    #[arg(long, env = "MOSAIC_OUT_DIR", default_value = "results")]
    pub out: PathBuf,
    /// Worker threads for Monte Carlo runs (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Parameter to sweep: a dotted path, or one of `pd0`, `rho`, `omega`,
    /// `lambda_c`.
    #[arg(long)]
    pub param: String,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub values: Vec<String>,
}

/// Failure of a CLI command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Output(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

fn output_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Output(format!("{}: {e}", path.display()))
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Errors are reported on stderr.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("mosaic: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Validate(args) => {
            let (cfg, _) = load_config(args, &[])?;
            println!(
                "ok: {} nodes, {} arcs, {} targets, methods {}",
                cfg.network.nodes.len(),
                cfg.network.arcs.len(),
                cfg.targets.len(),
                method_names(&cfg).join(",")
            );
            Ok(())
        }
        Command::Run(args) => with_threads(args.threads, || cmd_run(args)),
        Command::Sweep(args) => with_threads(args.run.threads, || cmd_sweep(args)),
    }
}

fn with_threads<F>(threads: Option<usize>, f: F) -> Result<(), CliError>
where
    F: FnOnce() -> Result<(), CliError> + Send,
{
    match threads {
        None => f(),
        Some(0) => Err(CliError::Config("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(f),
    }
}

fn method_names(cfg: &ScenarioConfig) -> Vec<String> {
    cfg.methods()
        .map(|m| m.iter().map(|m| m.name()).collect())
        .unwrap_or_default()
}

/// Reads, edits and validates a scenario. Returns it with the SHA-256 of its
/// canonical JSON form.
pub fn load_config(
    args: &ConfigArgs,
    extra: &[(String, String)],
) -> Result<(ScenarioConfig, String), CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    let mut doc: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    let mut edits = args
        .overrides
        .iter()
        .map(|o| parse_override(o))
        .collect::<Result<Vec<_>, _>>()?;
    edits.extend(extra.iter().cloned());
    if let Some(seed) = args.seed {
        edits.push(("run.seed".into(), seed.to_string()));
    }
    for (key, value) in &edits {
        apply_override(&mut doc, key, value)?;
    }
    let cfg: ScenarioConfig = serde_json::from_value(doc)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    cfg.validate()?;
    let hash = config_hash(&cfg);
    Ok((cfg, hash))
}

/// SHA-256 of the canonical JSON serialization, hex-encoded.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let digest = Sha256::digest(serde_json::to_vec(cfg).expect("config serializes"));
    digest.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn parse_override(s: &str) -> Result<(String, String), CliError> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(CliError::Config(format!("override {s:?} is not KEY=VALUE"))),
    }
}

fn sweep_key(param: &str) -> String {
    match param {
        "pd0" => "run.pd0".into(),
        "rho" => "run.rho".into(),
        "omega" => "run.omega".into(),
        "lambda_c" => "clutter.lambda_c".into(),
        other => other.into(),
    }
}

/// Sets the value at dotted path `key`, creating object members as needed.
pub fn apply_override(doc: &mut Value, key: &str, raw: &str) -> Result<(), CliError> {
    let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.into()));
    let mut slot = doc;
    for part in key.split('.') {
        slot = match slot {
            Value::Object(map) => map.entry(part.to_string()).or_insert(Value::Null),
            Value::Array(items) => {
                let i: usize = part.parse().map_err(|_| {
                    CliError::Config(format!("override {key}: {part:?} is not an index"))
                })?;
                let len = items.len();
                items.get_mut(i).ok_or_else(|| {
                    CliError::Config(format!("override {key}: index {i} out of {len}"))
                })?
            }
            Value::Null => {
                *slot = Value::Object(Default::default());
                match slot {
                    Value::Object(map) => map.entry(part.to_string()).or_insert(Value::Null),
                    _ => unreachable!(),
                }
            }
            _ => {
                return Err(CliError::Config(format!(
                    "override {key}: {part:?} is inside a scalar"
                )))
            }
        };
    }
    *slot = value;
    Ok(())
}

fn pd0_label(cfg: &ScenarioConfig) -> String {
    if let Some(pd) = cfg.run.pd0 {
        return format_value(pd);
    }
    let first = cfg.network.nodes[0].pd0;
    if cfg.network.nodes.iter().all(|n| n.pd0 == first) {
        format_value(first)
    } else {
        "mixed".into()
    }
}

fn format_value(v: f64) -> String {
    format!("{v:.6}")
}

/// `ospa_per_scan.csv`.
pub fn ospa_csv(summary: &Summary) -> String {
    let mut s = String::from("scan,method,mean_ospa\n");
    for k in 0..summary.true_cardinality.len() {
        for m in &summary.methods {
            let _ = writeln!(s, "{k},{},{}", m.method, format_value(m.mean_ospa[k]));
        }
    }
    s
}

/// `cardinality_per_scan.csv`.
pub fn cardinality_csv(summary: &Summary) -> String {
    let mut s = String::from("scan,method,mean_est_card,true_card\n");
    for (k, truth) in summary.true_cardinality.iter().enumerate() {
        for m in &summary.methods {
            let _ = writeln!(
                s,
                "{k},{},{},{truth}",
                m.method,
                format_value(m.mean_cardinality[k])
            );
        }
    }
    s
}

/// `summary.csv`.
pub fn summary_csv(summary: &Summary, pd0: &str) -> String {
    let mut s = String::from("method,pd0,time_avg_ospa\n");
    for m in &summary.methods {
        let _ = writeln!(s, "{},{pd0},{}", m.method, format_value(m.time_avg_ospa));
    }
    s
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| output_err(&path, e))?;
    Ok(path)
}

fn write_manifest(
    dir: &Path,
    hash: &str,
    cfg: &ScenarioConfig,
    command: &str,
    outputs: &[PathBuf],
    started: Instant,
) -> Result<(), CliError> {
    let manifest = serde_json::json!({
        "command": command,
        "config_hash": hash,
        "seed": cfg.run.seed,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "outputs": outputs
            .iter()
            .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
            .collect::<Vec<_>>(),
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
    });
    write_file(
        dir,
        "manifest.json",
        &serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    )?;
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let (cfg, hash) = load_config(&args.config, &[])?;
    fs::create_dir_all(&args.out).map_err(|e| output_err(&args.out, e))?;
    eprintln!(
        "mosaic: {} runs x {} scans, methods {}",
        cfg.run.mc_runs,
        cfg.run.scans,
        method_names(&cfg).join(",")
    );
    let summary = run_experiment(&cfg)?.summary();
    let outputs = vec![
        write_file(&args.out, "ospa_per_scan.csv", &ospa_csv(&summary))?,
        write_file(&args.out, "cardinality_per_scan.csv", &cardinality_csv(&summary))?,
        write_file(&args.out, "summary.csv", &summary_csv(&summary, &pd0_label(&cfg)))?,
    ];
    write_manifest(&args.out, &hash, &cfg, "run", &outputs, started)?;
    for m in &summary.methods {
        eprintln!("{:<12} time-averaged OSPA {:.2}", m.method, m.time_avg_ospa);
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let started = Instant::now();
    if args.values.is_empty() {
        return Err(CliError::Config("sweep needs at least one value".into()));
    }
    let key = sweep_key(&args.param);
    let (base, hash) = load_config(&args.run.config, &[])?;
    fs::create_dir_all(&args.run.out).map_err(|e| output_err(&args.run.out, e))?;
    let mut csv = String::from("value,method,time_avg_ospa\n");
    for value in &args.values {
        let (cfg, _) = load_config(&args.run.config, &[(key.clone(), value.clone())])?;
        eprintln!("mosaic: {key} = {value}");
        let summary = run_experiment(&cfg)?.summary();
        for m in &summary.methods {
            let _ = writeln!(csv, "{value},{},{}", m.method, format_value(m.time_avg_ospa));
        }
    }
    let outputs = vec![write_file(&args.run.out, "sweep.csv", &csv)?];
    write_manifest(&args.run.out, &hash, &base, "sweep", &outputs, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_edit_nested_values() {
        let mut doc = serde_json::json!({"run": {"rule": ["gci", "aa"]}, "network": {"nodes": [{"pd0": 0.9}]}});
        apply_override(&mut doc, "run.rule", "aa").unwrap();
        apply_override(&mut doc, "run.mc_runs", "2").unwrap();
        apply_override(&mut doc, "network.nodes.0.pd0", "0.5").unwrap();
        assert_eq!(doc["run"]["rule"], "aa");
        assert_eq!(doc["run"]["mc_runs"], 2);
        assert_eq!(doc["network"]["nodes"][0]["pd0"], 0.5);
        assert!(apply_override(&mut doc, "network.nodes.3.pd0", "1").is_err());
        assert!(apply_override(&mut doc, "run.mc_runs.x", "1").is_err());
        assert!(parse_override("novalue").is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = ScenarioConfig::default_scenario();
        let mut b = a.clone();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.run.seed += 1;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }
}

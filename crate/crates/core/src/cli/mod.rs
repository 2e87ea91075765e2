//! Command-line scenario runner.

pub mod config;
pub mod report;
pub mod scenarios;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{ConfigError, Params};
pub use report::{Check, Report};
use config::{key, Key, Kind};

#[derive(Debug, Parser)]
#[command(name = "unitary-measure", version, about = "Reproducible unitary-measure experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one named scenario and write its CSV files and summary.
    Run(RunArgs),
    /// List scenarios with their parameters and defaults.
    List,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    #[arg(long)]
    pub scenario: String,
    /// Plain-text `key = value` parameter file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `out` in the config file).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random seed (overrides `seed` in the config file).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Multiplier applied to every tolerance.
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_CONFIG: i32 = 2;

const COMMON_KEYS: [Key; 2] = [key("out", Kind::Text, "results"), key("seed", Kind::Count, "1")];

/// Result of a completed scenario run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub out_dir: PathBuf,
    pub header: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

/// Failure before any check could be evaluated.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numerics(crate::Error),
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Numerics(crate::Error::InvalidParameter { .. }) => EXIT_BAD_CONFIG,
            _ => EXIT_CHECK_FAILED,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error: {e}"),
            RunError::Numerics(e) => write!(f, "scenario failed: {e}"),
            RunError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

/// Parses a scenario's parameters from config text, including `out` and `seed`.
pub fn scenario_params(name: &str, text: &str) -> Result<(&'static scenarios::Scenario, Params), ConfigError> {
    let scenario = scenarios::find(name).ok_or_else(|| ConfigError {
        line: None,
        message: format!("unknown scenario `{name}`; expected one of {}", scenarios::names().join(", ")),
    })?;
    let keys: Vec<Key> = scenario.keys.iter().chain(&COMMON_KEYS).copied().collect();
    Ok((scenario, config::parse(text, &keys)?))
}

/// Runs a scenario and writes every output file plus `summary.txt` into the
/// output directory once the scenario has finished.
pub fn run(args: &RunArgs) -> Result<Outcome, RunError> {
    let text = match &args.config {
        Some(path) => fs::read_to_string(path).map_err(|e| {
            RunError::Config(ConfigError { line: None, message: format!("cannot read {}: {e}", path.display()) })
        })?,
        None => String::new(),
    };
    if !(args.tol_scale > 0.0 && args.tol_scale.is_finite()) {
        return Err(RunError::Config(ConfigError { line: None, message: "--tol-scale must be positive".into() }));
    }
    let (scenario, params) = scenario_params(&args.scenario, &text).map_err(RunError::Config)?;
    let seed = args.seed.unwrap_or(params.count("seed") as u64);
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from(params.text("out")));
    let header = format!(
        "# unitary-measure {} scenario={} seed={} tol_scale={} {}",
        env!("CARGO_PKG_VERSION"),
        scenario.name,
        seed,
        args.tol_scale,
        params.describe()
    );
    log::info!("running {} with seed {seed}", scenario.name);
    let mut report = Report::new(args.tol_scale);
    scenario.run(&params, seed, &mut report).map_err(RunError::Numerics)?;
    write_outputs(&out_dir, &header, &report).map_err(RunError::Io)?;
    Ok(Outcome { report, out_dir, header })
}

fn write_outputs(dir: &Path, header: &str, report: &Report) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, contents) in &report.files {
        fs::write(dir.join(name), format!("{header}\n{contents}"))?;
    }
    fs::write(dir.join("summary.txt"), report.summary(header))
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_BAD_CONFIG } else { EXIT_PASS };
        }
    };
    match cli.command {
        Command::List => {
            for s in &scenarios::SCENARIOS {
                println!("{}", s.name);
                for k in s.keys {
                    println!("    {} = {}", k.name, k.default);
                }
            }
            EXIT_PASS
        }
        Command::Run(args) => match run(&args) {
            Ok(outcome) => {
                for c in &outcome.report.checks {
                    let status = if c.passed() { "PASS" } else { "FAIL" };
                    println!("{status} {}: {:.3e} (tolerance {:.3e})", c.name, c.measured, c.tolerance);
                }
                println!("wrote {}", outcome.out_dir.display());
                outcome.exit_code()
            }
            Err(e) => {
                eprintln!("{e}");
                e.exit_code()
            }
        },
    }
}

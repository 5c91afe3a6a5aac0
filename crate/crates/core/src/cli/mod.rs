//! Command-line front end: `randfun <command> [flags]`.
//!
//! Every command writes `<stem>.csv` and `<stem>.json` into the output
//! directory (`RANDFUN_OUT`, else `--out`, else `randfun-out`), optionally an
//! SVG plot, and exits with 0 when all checks pass, 2 when one fails, and 1
//! on usage or configuration errors.

mod commands;
pub mod config;
pub mod plot;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::Value;

use crate::experiments::ExperimentReport;
pub use config::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Growth,
    Sample,
    Zeros,
    Hole,
    Sectors,
    Concentration,
    Lacunary,
    Realzeros,
    Covariance,
    Moments,
    Khinchin,
    Turan,
    Kahane,
    Counterexample,
    Asymptotics,
    Gn,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Growth => "growth",
            Self::Sample => "sample",
            Self::Zeros => "zeros",
            Self::Hole => "hole",
            Self::Sectors => "sectors",
            Self::Concentration => "concentration",
            Self::Lacunary => "lacunary",
            Self::Realzeros => "realzeros",
            Self::Covariance => "covariance",
            Self::Moments => "moments",
            Self::Khinchin => "khinchin",
            Self::Turan => "turan",
            Self::Kahane => "kahane",
            Self::Counterexample => "counterexample",
            Self::Asymptotics => "asymptotics",
            Self::Gn => "gn",
        }
    }

    pub fn all_names() -> Vec<&'static str> {
        Self::value_variants().iter().map(|c| c.name()).collect()
    }
}

#[derive(Debug, Parser)]
#[command(name = "randfun", allow_negative_numbers = true, about = "Zeros, growth and hole probabilities of random Taylor series")]
struct Cli {
    command: Command,
    /// TOML file of key = value pairs, top level or under [command]
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    params: Params,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(crate::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => f.write_str(m),
            Self::Run(e) => write!(f, "{e}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        Self::Run(e)
    }
}

/// What a command produced: the report, its file stem and the plot to draw.
pub(crate) struct Outcome {
    pub report: ExperimentReport,
    pub plot: Option<PlotKind>,
    /// Lines printed before the verdict.
    pub headline: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum PlotKind {
    Zeros(f64),
    Growth,
    Hole,
    Sectors,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let name = cli.command.name();
    let params = match &cli.config {
        Some(path) => {
            let (top, section) = config::load(path, name, &Command::all_names())?;
            cli.params.clone().or(section).or(top)
        }
        None => cli.params.clone(),
    };
    let out_dir = std::env::var_os("RANDFUN_OUT")
        .map(PathBuf::from)
        .or_else(|| params.out.clone())
        .unwrap_or_else(|| PathBuf::from("randfun-out"));
    let threads = params.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("threads: {e}")))?;
    let outcome = pool.install(|| commands::dispatch(cli.command, &params))?;
    let mut report = outcome.report;
    report.extend_config("run", run_echo(name, &params));
    let (csv, json) = report.write(&out_dir, name)?;
    for line in &outcome.headline {
        println!("{line}");
    }
    let verdict = match report.passed() {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "EXPLORATORY",
    };
    println!("{name}: {verdict} (seed {}, config {})", report.seed, report.config_hash);
    for c in &report.checks {
        println!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    for n in &report.notes {
        println!("  note: {n}");
    }
    println!("  wrote {}", csv.display());
    println!("  wrote {}", json.display());
    if params.emit_plots.unwrap_or(false) {
        if let Some(kind) = outcome.plot {
            let svg = out_dir.join(format!("{name}.svg"));
            let res = match kind {
                PlotKind::Zeros(r) => plot::zeros_scatter(&csv, r, svg),
                PlotKind::Growth => plot::growth_curve(&csv, svg),
                PlotKind::Hole => plot::hole_curve(&csv, svg),
                PlotKind::Sectors => plot::sector_histogram(&csv, svg),
            };
            match res {
                Ok(p) => println!("  wrote {}", p.display()),
                Err(e) => eprintln!("warning: plot skipped: {e}"),
            }
        }
    }
    Ok(if report.passed() == Some(false) { EXIT_FAIL } else { EXIT_PASS })
}

/// Result-affecting parameters for the config echo; output location,
/// thread count and plotting are left out so they cannot change the files.
fn run_echo(command: &str, params: &Params) -> Value {
    let mut v = serde_json::to_value(params).expect("params serialize");
    if let Value::Object(map) = &mut v {
        map.retain(|k, val| !val.is_null() && !matches!(k.as_str(), "out" | "threads" | "emit_plots"));
        map.insert("command".into(), Value::String(command.into()));
    }
    v
}

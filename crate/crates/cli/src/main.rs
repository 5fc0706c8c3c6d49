//! `zonefit`: fit strike-zone models and analyze gray-zone calls from pitch CSVs.
//!
//! Exit codes: 0 success, 1 internal error, 2 input or validation error.

mod commands;
mod error;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(
    name = "zonefit",
    version,
    about = "Strike-zone estimation from pitch-tracking data"
)]
struct Cli {
    /// Seed for every random stream (bootstrap, start jitter, simulation).
    /// Overrides seeds in config files; defaults to 0.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a pitch CSV and list row-level violations.
    Validate(ValidateArgs),
    /// Fit the zone model per season or per umpire.
    Fit(FitArgs),
    /// Draw probability contours of a fitted zone.
    Contour(ContourArgs),
    /// Difference of two strike-probability grids.
    Compare(CompareArgs),
    /// Strike-call ratios in the gray-zone bands.
    Zones(RatioArgs),
    /// Hit-attempt ratios in the gray-zone bands.
    Attempts(RatioArgs),
    /// Pitch-type mix of 2-2 decision pitches per band.
    Mix(MixArgs),
    /// Generate a synthetic pitch CSV.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug)]
pub struct SchemaArg {
    /// JSON column mapping for CSVs that use non-canonical headers.
    #[arg(long)]
    schema: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    input: PathBuf,
    #[command(flatten)]
    schema: SchemaArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FitGrouping {
    Season,
    Umpire,
    None,
}

#[derive(Args, Debug)]
pub struct FitOverrides {
    /// JSON fit configuration; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_starts: Option<usize>,
    #[arg(long)]
    n_bootstrap: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "season")]
    group_by: FitGrouping,
    /// Minimum called pitches for an umpire-season group to be fitted.
    #[arg(long, default_value_t = zonefit::fit::MIN_CALLED)]
    min_called: usize,
    #[command(flatten)]
    fit: FitOverrides,
    #[command(flatten)]
    schema: SchemaArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ContourArgs {
    /// FitResult JSON written by `zonefit fit`.
    fit: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.25, 0.5, 0.75, 0.9])]
    levels: Vec<f64>,
    /// Vertices per contour.
    #[arg(long, default_value_t = 360)]
    points: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Fit JSON, grid CSV or pitch CSV.
    a: PathBuf,
    /// Fit JSON, grid CSV or pitch CSV; the output is `a - b`.
    b: PathBuf,
    /// Grid extent as x_min,x_max,y_min,y_max in feet.
    #[arg(long, value_parser = parse_extent, allow_hyphen_values = true)]
    extent: Option<zonefit::Extent>,
    #[arg(long, default_value_t = zonefit::grid::DEFAULT_STEP)]
    step: f64,
    /// Fit settings used when an input is a pitch CSV.
    #[command(flatten)]
    fit: FitOverrides,
    #[command(flatten)]
    schema: SchemaArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RatioArgs {
    input: PathBuf,
    /// Bands to report: `all`, single bands such as `Low2`, or pooled sides
    /// such as `Low`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    band: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "season")]
    group_by: Vec<String>,
    #[arg(long, default_value_t = zonefit::DEFAULT_BAND_WIDTH)]
    band_width: f64,
    #[command(flatten)]
    schema: SchemaArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MixArgs {
    input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "all")]
    band: Vec<String>,
    /// Report each season separately.
    #[arg(long)]
    by_season: bool,
    #[arg(long, default_value_t = zonefit::DEFAULT_BAND_WIDTH)]
    band_width: f64,
    #[command(flatten)]
    schema: SchemaArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// JSON synthesis configuration.
    config: PathBuf,
    /// Overrides the configured pitch count.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_extent(s: &str) -> std::result::Result<zonefit::Extent, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match v[..] {
        [x_min, x_max, y_min, y_max] => Ok(zonefit::Extent {
            x_min,
            x_max,
            y_min,
            y_max,
        }),
        _ => Err(format!(
            "expected x_min,x_max,y_min,y_max, got {} values",
            v.len()
        )),
    }
}

/// Sizes the global thread pool from ZONEFIT_THREADS (0 or unset = one
/// thread per core).
fn configure_threads() -> Result<()> {
    let threads = match std::env::var("ZONEFIT_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::input(format!(
                "ZONEFIT_THREADS must be a non-negative integer, got `{v}`"
            ))
        })?,
        Err(_) => 0,
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::internal(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let seed = cli.seed;
    match cli.command {
        Command::Validate(a) => commands::validate::run(&a),
        Command::Fit(a) => commands::fit::run(&a, seed),
        Command::Contour(a) => commands::contour::run(&a, seed),
        Command::Compare(a) => commands::compare::run(&a, seed),
        Command::Zones(a) => commands::ratios::run_zones(&a, seed),
        Command::Attempts(a) => commands::ratios::run_attempts(&a, seed),
        Command::Mix(a) => commands::ratios::run_mix(&a, seed),
        Command::Simulate(a) => commands::simulate::run(&a, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

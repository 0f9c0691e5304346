//! `dmnet`: sweep the four-node DM-coupled network over `(pair, dx, t)`
//! grids, emit per-point steering and negativity records, and run the
//! built-in invariant suite.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration error,
//! 3 i/o error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dmnet_core::error::Error;
use dmnet_core::network::NodePair;
use dmnet_core::run_selfcheck;
use dmnet_core::sweep::{figure_preset, run_sweep, FigurePreset, OutputFormat, SweepConfig};

#[derive(Parser)]
#[command(
    name = "dmnet",
    version,
    about = "Exact simulator of a four-node network coupled by a Dzyaloshinskii-Moriya interaction: \
             entropic steering and negativity over (pair, dx, t) grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep over node pairs, coupling strengths and times.
    Sweep(SweepArgs),
    /// Run one of the fixed figure grids (fig2, fig3, fig4, fig5).
    Preset(PresetArgs),
    /// Run the built-in invariant suite; exits 1 on any violation.
    Check,
}

#[derive(Args)]
struct SweepArgs {
    /// Node pair as A,B (repeatable), e.g. --pair 2,3 --pair 2,4
    #[arg(long = "pair", value_name = "A,B", required = true)]
    pairs: Vec<String>,

    /// Comma-separated coupling strengths, e.g. --dx 0.03,0.05,0.1
    #[arg(long, value_name = "DX[,DX...]", conflicts_with = "dx_range")]
    dx: Option<String>,

    /// Coupling grid as MIN:MAX:STEPS (inclusive endpoints)
    #[arg(long, value_name = "MIN:MAX:STEPS")]
    dx_range: Option<String>,

    /// Time grid as MIN:MAX:STEPS (inclusive endpoints)
    #[arg(long, value_name = "MIN:MAX:STEPS", required = true)]
    t_range: String,

    /// Output format
    #[arg(long, value_name = "csv|jsonl", default_value = "csv")]
    format: String,

    /// Output file (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Also emit closed-form discrepancy reports for pairs 2-3 and 2-4
    /// (to PATH.disc next to --out, or after the records on stdout)
    #[arg(long)]
    discrepancy: bool,
}

#[derive(Args)]
struct PresetArgs {
    /// Preset name: fig2, fig3, fig4 or fig5
    #[arg(value_name = "NAME")]
    name: String,

    /// Output format
    #[arg(long, value_name = "csv|jsonl", default_value = "csv")]
    format: String,

    /// Output file (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run() -> Result<ExitCode, Error> {
    match Cli::parse().command {
        Command::Sweep(args) => {
            let config = build_config(&args)?;
            run_sweep(&config)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Preset(args) => {
            let preset: FigurePreset = args.name.parse()?;
            let mut config = figure_preset(preset);
            config.format = args.format.parse()?;
            config.output = args.out;
            run_sweep(&config)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check => {
            let outcomes = run_selfcheck();
            let mut all_passed = true;
            for outcome in &outcomes {
                let tag = if outcome.passed { "ok  " } else { "FAIL" };
                println!("{tag} {} - {}", outcome.name, outcome.detail);
                all_passed &= outcome.passed;
            }
            if all_passed {
                println!("all {} checks passed", outcomes.len());
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn build_config(args: &SweepArgs) -> Result<SweepConfig, Error> {
    let pairs = args
        .pairs
        .iter()
        .map(|p| p.parse::<NodePair>())
        .collect::<Result<Vec<_>, _>>()?;

    let dx_values = match (&args.dx, &args.dx_range) {
        (Some(list), None) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad dx value `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?,
        (None, Some(range)) => {
            let (min, max, steps) = parse_range(range)?;
            dmnet_core::sweep::linspace(min, max, steps)
        }
        (None, None) => {
            return Err(Error::Config("one of --dx or --dx-range is required".into()))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with enforces exclusivity"),
    };

    let (t_min, t_max, t_steps) = parse_range(&args.t_range)?;

    let mut config = SweepConfig::new(pairs, dx_values, t_min, t_max, t_steps);
    config.format = args.format.parse()?;
    config.output = args.out.clone();
    config.include_discrepancy = args.discrepancy;
    config.validate()?;
    Ok(config)
}

fn parse_range(spec: &str) -> Result<(f64, f64, usize), Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "range must be MIN:MAX:STEPS, got `{spec}`"
        )));
    }
    let min = parts[0]
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("bad range minimum `{}`", parts[0])))?;
    let max = parts[1]
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("bad range maximum `{}`", parts[1])))?;
    let steps = parts[2]
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("bad step count `{}`", parts[2])))?;
    Ok((min, max, steps))
}

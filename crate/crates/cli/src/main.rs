#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, EXIT_USER};

#[derive(Debug, Parser)]
#[command(name = "mmqi", version, about = "Multimode spin-wave memory noise model, simulator and fitter")]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Simulation seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated output formats: csv, json, svg.
    #[arg(long, global = true, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Worker threads for the simulator (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Model V(m) and S(m) curves.
    Curves,
    /// Event-level CHSH simulation.
    Simulate {
        /// Number of temporal modes (default 14).
        #[arg(long)]
        m: Option<u32>,
        /// Number of write trains to simulate.
        #[arg(long)]
        trials: Option<u64>,
        /// Target CHSH standard error used to size the run when --trials is absent.
        #[arg(long)]
        target_sigma: Option<f64>,
        /// Also write one JSON line per heralded trial to events.jsonl.
        #[arg(long)]
        event_log: bool,
    },
    /// Fit the solid-angle ratio or the storage lifetime to x,s,sigma data.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        target: FitTarget,
        /// Mode number for lifetime fits.
        #[arg(long, default_value_t = 14)]
        m: u32,
    },
    /// Collection-channel solid-angle ratios and the CH1 beam profile.
    Geometry {
        #[arg(long, default_value_t = 75)]
        samples: usize,
    },
    /// Regenerate a figure's data with its published anchors.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FitTarget {
    BetaRatio,
    Lifetime,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

/// Settings after merging flags over the config file over defaults.
pub struct Context {
    pub config: RunConfig,
    pub out: PathBuf,
    pub formats: BTreeSet<Format>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

impl Context {
    fn build(cli: &Cli) -> Result<Self, CliError> {
        let config = match &cli.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let out = cli.out.clone().or_else(|| config.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
        let formats = match &cli.format {
            Some(f) => f.iter().copied().collect(),
            None => config.formats.clone().unwrap_or_else(|| [Format::Csv, Format::Json].into()),
        };
        Ok(Self { config, out, formats, seed: cli.seed, threads: cli.threads })
    }

    pub fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Context::build(&cli)?;
    match cli.command {
        Command::Curves => commands::curves(&ctx),
        Command::Simulate { m, trials, target_sigma, event_log } => {
            commands::simulate(&ctx, commands::SimFlags { m, trials, target_sigma, event_log })
        }
        Command::Fit { data, target, m } => commands::fit(&ctx, &data, target, m),
        Command::Geometry { samples } => commands::geometry(&ctx, samples),
        Command::Reproduce { figure } => commands::reproduce(&ctx, figure),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USER) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

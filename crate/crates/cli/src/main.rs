mod commands;
mod config;
mod error;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

/// Expert-driven genetic tuning of a chess evaluation function.
#[derive(Parser, Debug)]
#[command(name = "evochess", version)]
pub struct Cli {
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write random playout positions as unscored EPD.
    Gen(GenArgs),
    /// Add expert `ce` scores to EPD positions.
    Score(ScoreArgs),
    /// Evolve parameters against a scored training file.
    Evolve(EvolveArgs),
    /// Play a two-color match between two parameter sets.
    Match(MatchArgs),
    /// Rating difference and interval from match tallies.
    Rate(RateArgs),
    /// Count best-move suite positions solved at a fixed depth.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct GenArgs {
    /// `key = value` file of flag defaults.
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 4)]
    pub min_plies: u32,
    #[arg(long, default_value_t = 80)]
    pub max_plies: u32,
    /// Keep only positions without a pending material swing.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub quiet: bool,
    #[arg(long)]
    pub out: String,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct ScoreArgs {
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long)]
    pub input: String,
    /// static-hidden, depth2-hidden, epd-file:<path> or uci:<command>.
    #[arg(long, default_value = "static-hidden")]
    pub backend: String,
    /// Parameters of the hidden backends: `reference`, `random:<seed>` or a file.
    #[arg(long, default_value = "reference")]
    pub hidden_params: String,
    /// Search depth requested from a UCI engine.
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
    #[arg(long, default_value_t = 10.0)]
    pub timeout_secs: f64,
    #[arg(long)]
    pub out: String,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct EvolveArgs {
    #[arg(long)]
    pub config: Option<String>,
    /// Scored EPD training positions.
    #[arg(long)]
    pub train: String,
    /// Scored EPD holdout positions.
    #[arg(long)]
    pub test: Option<String>,
    #[arg(long)]
    pub out_dir: String,
    #[arg(long, default_value_t = 1000)]
    pub population_size: usize,
    #[arg(long, default_value_t = 0.75)]
    pub crossover_rate: f64,
    #[arg(long, default_value_t = 0.002)]
    pub mutation_rate: f64,
    #[arg(long, default_value_t = 300)]
    pub generations: usize,
    #[arg(long, default_value_t = 1000)]
    pub sample_size: usize,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub resample: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write a checkpoint every K generations; 0 disables.
    #[arg(long, default_value_t = 0)]
    pub checkpoint_every: usize,
    /// Continue from a checkpoint file.
    #[arg(long)]
    pub resume: Option<String>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct MatchArgs {
    #[arg(long)]
    pub config: Option<String>,
    /// `reference`, `zero`, `random:<seed>` or a parameter file.
    #[arg(long)]
    pub params_a: String,
    #[arg(long)]
    pub params_b: String,
    /// EPD openings; the bundled set when omitted.
    #[arg(long)]
    pub openings: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    #[arg(long, default_value_t = evochess::arena::DEFAULT_MAX_PLIES)]
    pub max_plies: usize,
    /// Per-game CSV report.
    #[arg(long)]
    pub report: Option<String>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct RateArgs {
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long)]
    pub wins: u32,
    #[arg(long)]
    pub draws: u32,
    #[arg(long)]
    pub losses: u32,
    /// Interval width in standard errors.
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct SuiteArgs {
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value = "reference")]
    pub params: String,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
}

fn parse(args: &[OsString]) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(args).map_err(|e| {
        let _ = e.print();
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
            _ => ExitCode::from(1),
        }
    })
}

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    // Required flags may live in the config file, so look for it first.
    let cli = match config_path(&args) {
        Some(path) => {
            let pairs = match config::read_pairs(&path) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{e}");
                    return e.exit_code();
                }
            };
            let sub = subcommand_name(&args);
            match parse(&config::splice(&args, &sub, &pairs)) {
                Ok(c) => c,
                Err(code) => return code,
            }
        }
        None => match parse(&args) {
            Ok(c) => c,
            Err(code) => return code,
        },
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn config_path(args: &[OsString]) -> Option<String> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(|v| v.to_string_lossy().into_owned());
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

fn subcommand_name(args: &[OsString]) -> String {
    const NAMES: [&str; 6] = ["gen", "score", "evolve", "match", "rate", "suite"];
    args.iter()
        .skip(1)
        .map(|a| a.to_string_lossy())
        .find(|a| NAMES.contains(&a.as_ref()))
        .map(|a| a.into_owned())
        .unwrap_or_default()
}

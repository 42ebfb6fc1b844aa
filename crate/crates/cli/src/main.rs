//! `termweight` command-line front end.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{SweepArgs, SynthArgs};
use config::{keys_help, RawConfig, Settings};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(termweight::Error),
    AllRowsFailed(usize),
}

impl From<termweight::Error> for CliError {
    fn from(e: termweight::Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Core(e) => e.fmt(f),
            CliError::AllRowsFailed(n) => write!(f, "all {n} sweep rows failed"),
        }
    }
}

impl CliError {
    /// 2 for unreadable input or bad configuration, 1 for failed computations.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(_) | CliError::AllRowsFailed(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "termweight",
    version,
    about = "Supervised term weighting and linear SVM text classification experiments",
    after_help = keys_help()
)]
struct Cli {
    /// flat `key = value` configuration file
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// override one configuration key (repeatable)
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// shorthand for --set seed=N
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// shorthand for --set output.dir=DIR
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the training vocabulary and write vocab.tsv
    Vocab,
    /// Fit vocabulary, term weights and classifier; write vocab.tsv, weights.tsv, model.tsv, provenance.json
    Train,
    /// Score data.test with the files in model.dir; write report.tsv and report.json
    Eval,
    /// Run the configured protocol; write experiment.tsv and experiment.json
    Experiment,
    /// Repeat the experiment along one axis; write sweep.tsv and sweep.json
    Sweep(SweepArgs),
    /// Write a seeded synthetic two-class corpus as TSV
    Synth(SynthArgs),
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let mut raw = RawConfig::default();
    if let Some(path) = &cli.config {
        raw.apply_file(path)?;
    }
    for assignment in &cli.set {
        raw.apply_assignment(assignment)?;
    }
    if let Some(seed) = cli.seed {
        raw.set("seed", &seed.to_string())?;
    }
    if let Some(dir) = &cli.out_dir {
        raw.set("output.dir", &dir.to_string_lossy())?;
    }
    Settings::resolve(raw)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let settings = settings(cli)?;
    match &cli.command {
        Command::Vocab => commands::vocab(&settings),
        Command::Train => commands::train(&settings),
        Command::Eval => commands::eval(&settings),
        Command::Experiment => commands::experiment(&settings),
        Command::Sweep(args) => {
            let axis = args.axis(&settings)?;
            commands::run_sweep(&settings, &axis)
        }
        Command::Synth(args) => commands::synth(&settings, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! `subangles`: exact angles between intermediate subfactors of
//! `R⋊H₀ ⊂ R⋊G`.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Outcome;
use config::{FileConfig, Options, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "subangles",
    version,
    about = "Exact angles between intermediate subfactors in finite-group models",
    after_help = "Exit codes: 0 pass, 1 theorem failure, 2 input error, 3 cap exceeded.\n\
                  Set SUBANGLES_CACHE_DIR to cache subgroup lattices between runs.\n\
                  Precedence: flags > --config file > defaults."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the intermediate lattice; writes census.json and lattice.dot under --out.
    Lattice,
    /// Write alpha.csv and beta.csv for the selected pairs.
    Angles,
    /// Print cosines and classification flags for the selected pairs.
    Classify,
    /// Run theorem batteries on the configured group or the built-in corpus.
    Verify,
    /// Counting bounds for the intermediate lattice.
    Bounds,
    /// Analyse abstract trace data read from a JSON (or .toml) file.
    Abstract {
        file: PathBuf,
    },
}

fn run(cli: &Cli) -> subfactor_angles::Result<Outcome> {
    let file = match &cli.options.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::resolve(&cli.options, &file)?;
    match &cli.command {
        Command::Lattice => commands::lattice(&cfg),
        Command::Angles => commands::angles(&cfg),
        Command::Classify => commands::classify_pairs(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Bounds => commands::bounds(&cfg),
        Command::Abstract { file } => commands::abstract_mode(&cfg, file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::TheoremFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

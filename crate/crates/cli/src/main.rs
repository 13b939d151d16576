mod election;
mod marriage;
mod sweep;
mod tourney;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

/// Manipulation laboratory for elections, tournaments and stable marriage.
#[derive(Parser, Debug)]
#[command(name = "maniplab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a preference profile.
    Generate(election::GenerateArgs),
    /// Run a voting rule on a profile.
    Elect(election::ElectArgs),
    /// Search for a manipulation of one profile.
    Manipulate(election::ManipulateArgs),
    /// Estimate manipulability and search cost across instance sizes.
    Sweep(sweep::SweepArgs),
    /// Decide whether a coalition can fix a cup or round robin.
    Tourney(tourney::TourneyArgs),
    /// Stable matchings and misreport probes.
    Match(marriage::MatchArgs),
}

/// Failure that is not the user's configuration, such as an unwritable
/// output file. Everything else exits with status 2.
#[derive(Debug)]
pub struct RuntimeFailure(pub String);

impl fmt::Display for RuntimeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RuntimeFailure {}

pub fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).context(RuntimeFailure(format!("cannot write {}", path.display())))
}

pub fn read_input(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => election::generate(args),
        Command::Elect(args) => election::elect(args),
        Command::Manipulate(args) => election::manipulate(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Tourney(args) => tourney::run(args),
        Command::Match(args) => marriage::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<RuntimeFailure>().is_some() {
                ExitCode::FAILURE
            } else {
                ExitCode::from(2)
            }
        }
    }
}

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use maniplab::tournaments::{
    cup_honest_winner, cup_min_throws, cup_possible_winners, cup_win_probability, parse_teams,
    rr_can_win, rr_min_throws_witness, Bracket, Coalition, RrWinCondition, RrWitness, ThrowPolicy,
};
use maniplab::TieBreakPolicy;

use crate::read_input;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Cup,
    Rr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    /// Members lose to the target and play honestly otherwise.
    Throw,
    Honest,
}

fn parse_condition(s: &str) -> Result<RrWinCondition, String> {
    if s == "strict" {
        return Ok(RrWinCondition::Strict);
    }
    s.parse::<TieBreakPolicy>()
        .map(RrWinCondition::TieBreak)
        .map_err(|_| format!("expected strict, lexmin, lexmax or order:<teams>, got `{s}`"))
}

#[derive(Args, Debug)]
pub struct TourneyArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Team file: the team count, then `i j winner` or `i j p` lines.
    #[arg(long)]
    teams: PathBuf,
    /// Comma-separated teams willing to throw games.
    #[arg(long, value_delimiter = ',')]
    coalition: Vec<usize>,
    #[arg(long)]
    target: usize,
    /// Also report the fewest games thrown.
    #[arg(long)]
    min_throws: bool,
    /// Report the cup win probability under --policy.
    #[arg(long)]
    prob: bool,
    #[arg(long, value_enum, default_value = "throw", requires = "prob")]
    policy: PolicyArg,
    /// Cup leaf order, comma separated; 0..t by default.
    #[arg(long, value_delimiter = ',')]
    bracket: Option<Vec<usize>>,
    /// Round-robin winner: strict, or a tie-break among the top scores.
    #[arg(long, default_value = "strict", value_parser = parse_condition)]
    rr_win: RrWinCondition,
}

pub fn run(args: TourneyArgs) -> anyhow::Result<()> {
    let model = parse_teams(&read_input(&args.teams)?)
        .with_context(|| format!("in {}", args.teams.display()))?;
    let t = model.teams();
    let coalition = Coalition::new(t, args.coalition.iter().copied())?;
    match args.kind {
        Kind::Cup => {
            let bracket = match &args.bracket {
                Some(leaves) => Bracket::new(leaves.clone())?,
                None => Bracket::identity(t)?,
            };
            let winners = cup_possible_winners(&bracket, &model, &coalition)?;
            if args.target >= t {
                bail!("target {} is not one of the {t} teams", args.target);
            }
            println!("honest winner: {}", cup_honest_winner(&bracket, &model)?);
            println!("can win: {}", yes_no(winners.can_win(args.target)));
            if args.min_throws {
                let throws = cup_min_throws(&bracket, &model, &coalition, args.target)?;
                println!(
                    "min throws: {}",
                    throws.map_or("none".into(), |c| c.to_string())
                );
            }
            if args.prob {
                let policy = match args.policy {
                    PolicyArg::Throw => ThrowPolicy::ThrowToTarget,
                    PolicyArg::Honest => ThrowPolicy::Honest,
                };
                let p = cup_win_probability(&bracket, &model, &coalition, args.target, policy)?;
                println!("win probability: {p:.6}");
            }
        }
        Kind::Rr => {
            if args.prob {
                bail!("--prob is only defined for cups");
            }
            if args.bracket.is_some() {
                bail!("--bracket only applies to cups");
            }
            let witness = if args.min_throws {
                rr_min_throws_witness(&model, &coalition, args.target, &args.rr_win)?
            } else {
                rr_can_win(&model, &coalition, args.target, &args.rr_win)?
            };
            println!("can win: {}", yes_no(witness.is_some()));
            if args.min_throws {
                println!(
                    "min throws: {}",
                    witness
                        .as_ref()
                        .map_or("none".into(), |w| w.throws.to_string())
                );
            }
            if let Some(w) = &witness {
                print_witness(w, &model);
            }
        }
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_witness(w: &RrWitness, model: &maniplab::tournaments::BeatsModel) {
    let scores: Vec<String> = w
        .scores
        .iter()
        .enumerate()
        .map(|(x, s)| format!("{x}={s}"))
        .collect();
    println!("scores: {}", scores.join(" "));
    for &(i, j, winner) in &w.results {
        if model.beats(i, j) != winner {
            println!("thrown: {i} v {j} won by {winner}");
        }
    }
}

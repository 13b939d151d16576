use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use maniplab::experiments::Distribution;
use maniplab::generators::{
    impartial_culture, read_profile, read_veto_profile, resample, single_peaked, single_troughed,
    urn, write_profile, write_veto_profile, UrnParams,
};
use maniplab::manipulation::{
    brute_force_manipulate, stv_constructive, veto_constructive_weighted,
    veto_destructive_weighted, CoalitionBallots, ManipulationError, ManipulationOutcome,
    ManipulationQuery, Stv, Veto,
};
use maniplab::rules::RoundOutcome;
use maniplab::{stv_outcome, veto_outcome, Profile, RuleKind, Seed, TieBreakPolicy, VetoProfile};

use crate::{read_input, write_output};

/// Where preferences come from: a file, or a sampled population.
#[derive(Args, Debug, Clone)]
pub struct PopulationArgs {
    /// Number of candidates.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of voters.
    #[arg(long)]
    pub n: Option<usize>,
    /// ic, urn[:a], single-peaked, single-troughed or file:<path>.
    #[arg(long)]
    pub dist: Option<Distribution>,
    /// Urn replacement count; implies the urn distribution.
    #[arg(long)]
    pub urn_a: Option<u64>,
    #[arg(long, default_value_t = Seed(0))]
    pub seed: Seed,
}

impl PopulationArgs {
    pub fn distribution(&self) -> anyhow::Result<Distribution> {
        match (&self.dist, self.urn_a) {
            (None | Some(Distribution::Urn(_)), Some(a)) => Ok(Distribution::Urn(UrnParams { a })),
            (Some(d), Some(_)) => bail!("--urn-a only applies to the urn distribution, not {d}"),
            (d, None) => Ok(d.clone().unwrap_or(Distribution::Ic)),
        }
    }

    fn sample(&self) -> anyhow::Result<Profile> {
        let n = self.n.context("--n is required when sampling a profile")?;
        let dist = self.distribution()?;
        if let Distribution::File(path) = &dist {
            let records = read_profile(&read_input(path)?)
                .with_context(|| format!("in {}", path.display()))?;
            if self.m.is_some_and(|m| m != records.m()) {
                bail!(
                    "{} has {} candidates, --m asks for {}",
                    path.display(),
                    records.m(),
                    self.m.unwrap()
                );
            }
            return Ok(resample(&records, n, self.seed)?);
        }
        let m = self.m.context("--m is required when sampling a profile")?;
        if m == 0 {
            bail!("--m must be at least 1");
        }
        Ok(match dist {
            Distribution::Ic => impartial_culture(m, n, self.seed),
            Distribution::Urn(p) => urn(m, n, p, self.seed)?,
            Distribution::SinglePeaked => single_peaked(m, n, self.seed),
            Distribution::SingleTroughed => single_troughed(m, n, self.seed),
            Distribution::File(_) => unreachable!("handled above"),
        })
    }
}

/// A profile file or sampling flags.
#[derive(Args, Debug, Clone)]
pub struct ProfileSource {
    /// Profile file; otherwise one is sampled from the population flags.
    #[arg(long, conflicts_with_all = ["m", "n", "dist", "urn_a"])]
    pub profile: Option<PathBuf>,
    #[command(flatten)]
    pub population: PopulationArgs,
}

impl ProfileSource {
    fn ranked(&self) -> anyhow::Result<Profile> {
        match &self.profile {
            Some(path) => {
                read_profile(&read_input(path)?).with_context(|| format!("in {}", path.display()))
            }
            None => self.population.sample(),
        }
    }

    /// Veto files are read as is; ranked ones become sincere vetoes.
    fn vetoes(&self) -> anyhow::Result<VetoProfile> {
        match &self.profile {
            Some(path) => read_veto_profile(&read_input(path)?)
                .with_context(|| format!("in {}", path.display())),
            None => Ok(self.population.sample()?.sincere_vetoes()),
        }
    }
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    population: PopulationArgs,
    /// With veto, write each voter's sincere veto instead of the ranking.
    #[arg(long, default_value = "stv")]
    rule: RuleKind,
    /// Output file; stdout by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let profile = args.population.sample()?;
    let text = match args.rule {
        RuleKind::Stv => write_profile(&profile),
        RuleKind::Veto => write_veto_profile(&profile.sincere_vetoes()),
    };
    emit(args.out, &text)
}

fn emit(out: Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => write_output(&path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Args, Debug)]
pub struct ElectArgs {
    #[command(flatten)]
    source: ProfileSource,
    #[arg(long, default_value = "stv")]
    rule: RuleKind,
    /// lexmin, lexmax or order:<c0,c1,...>; the earliest candidate is selected.
    #[arg(long, default_value = "lexmin")]
    tie: TieBreakPolicy,
}

fn tallies(pairs: impl Iterator<Item = (usize, u64)>) -> String {
    pairs
        .map(|(c, v)| format!("{c}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn elect(args: ElectArgs) -> anyhow::Result<()> {
    match args.rule {
        RuleKind::Stv => {
            let trace = stv_outcome(&args.source.ranked()?, &args.tie)?;
            for (i, round) in trace.rounds.iter().enumerate() {
                let action = match round.outcome {
                    RoundOutcome::Eliminated(c) => format!("eliminate {c}"),
                    RoundOutcome::Elected(c) => format!("elect {c}"),
                };
                println!(
                    "round {}: {} -> {action}",
                    i + 1,
                    tallies(round.tallies.iter().copied())
                );
            }
            println!("winner: {}", trace.winner);
        }
        RuleKind::Veto => {
            let tally = veto_outcome(&args.source.vetoes()?, &args.tie)?;
            println!(
                "vetoes: {}",
                tallies(tally.vetoes.iter().copied().enumerate())
            );
            println!("winner: {}", tally.winner);
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ManipulateArgs {
    #[command(flatten)]
    source: ProfileSource,
    #[arg(long, default_value = "stv")]
    rule: RuleKind,
    #[arg(long, default_value = "lexmin")]
    tie: TieBreakPolicy,
    /// Candidate to make win, or lose with --destructive.
    #[arg(long)]
    target: usize,
    /// Number of unit-weight manipulators.
    #[arg(long, default_value_t = 1, conflicts_with = "weights")]
    coalition: usize,
    /// Comma-separated manipulator weights.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u64>>,
    #[arg(long)]
    destructive: bool,
    /// Node cap for the STV search.
    #[arg(long)]
    budget: Option<u64>,
    /// Enumerate every coalition ballot assignment instead of using the solver.
    #[arg(long)]
    exhaustive: bool,
}

fn report<B: std::fmt::Display>(
    outcome: Result<ManipulationOutcome<B>, ManipulationError>,
    weights: &[u64],
) -> anyhow::Result<()> {
    let outcome = match outcome {
        Err(ManipulationError::BudgetExhausted(stats)) => {
            println!("verdict: undecided");
            println!("nodes: {}", stats.nodes);
            return Ok(());
        }
        other => other?,
    };
    match outcome.witness() {
        Some(ballots) => {
            println!("verdict: found");
            for (i, (b, w)) in ballots.iter().zip(weights).enumerate() {
                println!("member {} (weight {w}): {b}", i + 1);
            }
        }
        None => println!("verdict: impossible"),
    }
    println!("nodes: {}", outcome.stats.nodes);
    Ok(())
}

pub fn manipulate(args: ManipulateArgs) -> anyhow::Result<()> {
    let weights = args
        .weights
        .clone()
        .unwrap_or_else(|| vec![1; args.coalition]);
    let mode = CoalitionBallots::Distinct;
    match args.rule {
        RuleKind::Stv => {
            let fixed = args.source.ranked()?;
            let q = if args.destructive {
                ManipulationQuery::destructive(fixed, weights.clone(), args.target)
            } else {
                ManipulationQuery::constructive(fixed, weights.clone(), args.target)
            }
            .with_policy(args.tie);
            if args.exhaustive {
                report(brute_force_manipulate::<Stv>(&q, mode), &weights)
            } else if args.destructive {
                bail!("the STV solver answers constructive queries; add --exhaustive for destructive ones")
            } else {
                report(stv_constructive(&q, args.budget), &weights)
            }
        }
        RuleKind::Veto => {
            let fixed = args.source.vetoes()?;
            let q = if args.destructive {
                ManipulationQuery::destructive(fixed, weights.clone(), args.target)
            } else {
                ManipulationQuery::constructive(fixed, weights.clone(), args.target)
            }
            .with_policy(args.tie);
            let outcome = match (args.exhaustive, args.destructive) {
                (true, _) => brute_force_manipulate::<Veto>(&q, mode),
                (false, true) => veto_destructive_weighted(&q),
                (false, false) => veto_constructive_weighted(&q),
            };
            report(outcome, &weights)
        }
    }
}

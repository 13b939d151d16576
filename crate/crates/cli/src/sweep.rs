use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use maniplab::experiments::{
    emit_csv, emit_plot_data, run_sweep, run_sweep_with_threads, Distribution, Sweep, SweepSpec,
    TargetMode,
};
use maniplab::generators::read_profile;
use maniplab::{RuleKind, TieBreakPolicy};

use crate::election::PopulationArgs;
use crate::{read_input, write_output, RuntimeFailure};

pub const THREADS_VAR: &str = "MANIPLAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vary {
    M(usize, usize),
    N(usize, usize),
}

fn parse_vary(s: &str) -> Result<Vary, String> {
    let bad = || format!("expected m:<lo>:<hi> or n:<lo>:<hi>, got `{s}`");
    let mut parts = s.split(':');
    let (Some(axis), Some(lo), Some(hi), None) =
        (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(bad());
    };
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    match axis {
        "m" => Ok(Vary::M(lo, hi)),
        "n" => Ok(Vary::N(lo, hi)),
        _ => Err(bad()),
    }
}

fn parse_target(s: &str) -> Result<TargetMode, String> {
    if s == "random" {
        return Ok(TargetMode::RandomCandidate);
    }
    s.parse()
        .map(TargetMode::Fixed)
        .map_err(|_| format!("expected `random` or a candidate index, got `{s}`"))
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value = "stv")]
    rule: RuleKind,
    #[command(flatten)]
    population: PopulationArgs,
    /// Varying parameter and its inclusive range; without it a single point
    /// at --m and --n is run.
    #[arg(long, value_parser = parse_vary)]
    vary: Option<Vary>,
    /// Unit-weight manipulators per trial.
    #[arg(long, default_value_t = 1)]
    coalition: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Node cap per trial; exhausted trials are reported as undecided.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value = "lexmin")]
    tie: TieBreakPolicy,
    /// `random` or a fixed candidate index.
    #[arg(long, default_value = "random", value_parser = parse_target)]
    target: TargetMode,
    /// CSV output; stdout by default.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Space-separated table with a 1.62^m reference column.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

fn thread_cap() -> anyhow::Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => {
            let threads: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_VAR}=`{v}` is not a count"))?;
            if threads == 0 {
                bail!("{THREADS_VAR} must be at least 1");
            }
            Ok(Some(threads))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => bail!("{THREADS_VAR}: {e}"),
    }
}

fn spec_from(args: &SweepArgs) -> anyhow::Result<SweepSpec> {
    let distribution = args.population.distribution()?;
    let pop = &args.population;
    // A record file fixes m.
    let m = match (&distribution, pop.m) {
        (Distribution::File(path), None) => Some(
            read_profile(&read_input(path)?)
                .with_context(|| format!("in {}", path.display()))?
                .m(),
        ),
        (_, m) => m,
    };
    let sweep = match (args.vary, m, pop.n) {
        (Some(Vary::M(lo, hi)), _, Some(n)) => Sweep::VaryM { n, lo, hi },
        (Some(Vary::M(..)), _, None) => bail!("--vary m needs --n"),
        (Some(Vary::N(lo, hi)), Some(m), _) => Sweep::VaryN { m, lo, hi },
        (Some(Vary::N(..)), None, _) => bail!("--vary n needs --m"),
        (None, Some(m), Some(n)) => Sweep::VaryN { m, lo: n, hi: n },
        (None, _, _) => bail!("give --m and --n, or --vary"),
    };
    Ok(SweepSpec {
        rule: args.rule,
        distribution,
        sweep,
        coalition_size: args.coalition,
        target_mode: args.target,
        trials: args.trials,
        node_budget: args.budget,
        seed: pop.seed,
        policy: args.tie.clone(),
    })
}

pub fn run(args: SweepArgs) -> anyhow::Result<()> {
    let spec = spec_from(&args)?;
    let records = match thread_cap()? {
        Some(threads) => run_sweep_with_threads(&spec, threads),
        None => run_sweep(&spec),
    }
    .map_err(|e| match e {
        maniplab::experiments::ExperimentError::ThreadPool(msg) => {
            anyhow::Error::new(RuntimeFailure(msg))
        }
        other => other.into(),
    })?;
    for r in records.iter().filter(|r| r.errors > 0) {
        eprintln!(
            "warning: m={} n={}: {} trials failed: {}",
            r.m,
            r.n,
            r.errors,
            r.error.as_deref().unwrap_or("unknown error")
        );
    }
    let csv = emit_csv(&records);
    match &args.out {
        Some(path) => write_output(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &args.plot_data {
        write_output(path, &emit_plot_data(&records))?;
    }
    Ok(())
}

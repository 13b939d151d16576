//! Sweep harness: sample instances along a range of `m` or `n`, solve each
//! one exactly and aggregate how often manipulation succeeds and how many
//! search nodes it took.
//!
//! Trial `i` at point `(m, n)` draws its profile from
//! `seed.derive([m, n, i, 0])` and its target from `seed.derive([m, n, i, 1])`,
//! so records do not depend on how trials are scheduled across threads.

mod output;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::generators::{self, read_profile, FormatError, GenError, UrnParams};
use crate::manipulation::{
    stv_constructive, veto_constructive_weighted, ManipulationError, ManipulationQuery,
};
use crate::profile::{Candidate, Profile};
use crate::rules::{stv_winner, veto_winner, RuleKind};
use crate::seed::Seed;
use crate::tiebreak::TieBreakPolicy;

pub use output::{emit_csv, emit_plot_data, max_adjacent_slope, CSV_HEADER};

/// Growth rate of the published worst-case bound on STV manipulation search.
pub const BOUND_BASE: f64 = 1.62;

/// Two-sided 95% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("cannot read voting records {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("voting records {path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Distribution {
    Ic,
    Urn(UrnParams),
    SinglePeaked,
    SingleTroughed,
    /// Resample ballots from a profile file; `m` is the file's.
    File(PathBuf),
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Ic => f.write_str("ic"),
            Distribution::Urn(p) => write!(f, "urn:{}", p.a),
            Distribution::SinglePeaked => f.write_str("single-peaked"),
            Distribution::SingleTroughed => f.write_str("single-troughed"),
            Distribution::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl FromStr for Distribution {
    type Err = String;

    /// `ic`, `urn` (a = 1), `urn:<a>`, `single-peaked`/`sp`,
    /// `single-troughed`/`st`, `file:<path>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(Distribution::File(PathBuf::from(path)));
        }
        if let Some(a) = s.strip_prefix("urn:") {
            let a = a.parse().map_err(|_| format!("bad urn parameter `{a}`"))?;
            return Ok(Distribution::Urn(UrnParams { a }));
        }
        match s.to_ascii_lowercase().as_str() {
            "ic" => Ok(Distribution::Ic),
            "urn" => Ok(Distribution::Urn(UrnParams { a: 1 })),
            "single-peaked" | "sp" => Ok(Distribution::SinglePeaked),
            "single-troughed" | "st" => Ok(Distribution::SingleTroughed),
            _ => Err(format!(
                "unknown distribution `{s}` (expected ic, urn[:a], single-peaked, single-troughed or file:<path>)"
            )),
        }
    }
}

/// Which size parameter varies; both ranges are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sweep {
    VaryM { n: usize, lo: usize, hi: usize },
    VaryN { m: usize, lo: usize, hi: usize },
}

impl Sweep {
    /// `(m, n)` points in sweep order.
    pub fn points(&self) -> Vec<(usize, usize)> {
        match *self {
            Sweep::VaryM { n, lo, hi } => (lo..=hi).map(|m| (m, n)).collect(),
            Sweep::VaryN { m, lo, hi } => (lo..=hi).map(|n| (m, n)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TargetMode {
    /// Uniform over all `m` candidates, drawn before solving.
    #[default]
    RandomCandidate,
    Fixed(Candidate),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub rule: RuleKind,
    pub distribution: Distribution,
    pub sweep: Sweep,
    /// Unit-weight manipulators. Zero asks whether the target already wins.
    pub coalition_size: usize,
    pub target_mode: TargetMode,
    pub trials: usize,
    /// Node cap per trial; exhausted trials count as undecided.
    pub node_budget: Option<u64>,
    pub seed: Seed,
    pub policy: TieBreakPolicy,
}

impl SweepSpec {
    /// Single manipulator, random target, IC, no budget, seed 0, LexMin.
    pub fn new(rule: RuleKind, sweep: Sweep, trials: usize) -> Self {
        SweepSpec {
            rule,
            distribution: Distribution::Ic,
            sweep,
            coalition_size: 1,
            target_mode: TargetMode::RandomCandidate,
            trials,
            node_budget: None,
            seed: Seed(0),
            policy: TieBreakPolicy::LexMin,
        }
    }
}

/// Aggregate over the trials of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub found: usize,
    pub impossible: usize,
    pub undecided: usize,
    /// Trials that failed with an error, e.g. an instance too large to solve.
    pub errors: usize,
    /// `found / (found + impossible)`; NaN when nothing was decided.
    pub p_manipulable: f64,
    /// Node statistics over decided trials; NaN when nothing was decided.
    pub mean_nodes: f64,
    pub median_nodes: f64,
    pub p90_nodes: f64,
    pub undecided_fraction: f64,
    /// `mean_nodes / 1.62^m`.
    pub bound_ratio: f64,
    /// First error message, by trial index.
    pub error: Option<String>,
}

impl SweepRecord {
    pub fn decided(&self) -> usize {
        self.found + self.impossible
    }

    /// Binomial standard error of `p_manipulable`.
    pub fn standard_error(&self) -> f64 {
        let d = self.decided() as f64;
        (self.p_manipulable * (1.0 - self.p_manipulable) / d).sqrt()
    }
}

/// `1.62^m` by repeated multiplication, so it is identical on every platform.
pub fn bound(m: usize) -> f64 {
    (0..m).fold(1.0, |acc, _| acc * BOUND_BASE)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Trial {
    Found(u64),
    Impossible(u64),
    Undecided,
    Error(String),
}

/// Resolved ensemble, with any record file already loaded.
enum Ensemble {
    Ic,
    Urn(UrnParams),
    SinglePeaked,
    SingleTroughed,
    Records(Profile),
}

impl Ensemble {
    fn sample(&self, m: usize, n: usize, seed: Seed) -> Result<Profile, GenError> {
        match self {
            Ensemble::Ic => Ok(generators::impartial_culture(m, n, seed)),
            Ensemble::Urn(p) => generators::urn(m, n, *p, seed),
            Ensemble::SinglePeaked => Ok(generators::single_peaked(m, n, seed)),
            Ensemble::SingleTroughed => Ok(generators::single_troughed(m, n, seed)),
            Ensemble::Records(records) => generators::resample(records, n, seed),
        }
    }
}

fn invalid(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::InvalidSpec(msg.into())
}

fn validate(spec: &SweepSpec) -> Result<Ensemble, ExperimentError> {
    if spec.trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let (lo, hi) = match spec.sweep {
        Sweep::VaryM { lo, hi, .. } | Sweep::VaryN { lo, hi, .. } => (lo, hi),
    };
    if lo > hi {
        return Err(invalid(format!("empty range {lo}..={hi}")));
    }
    let min_m = match spec.sweep {
        Sweep::VaryM { lo, .. } => lo,
        Sweep::VaryN { m, .. } => m,
    };
    if min_m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    if let TargetMode::Fixed(c) = spec.target_mode {
        if c >= min_m {
            return Err(invalid(format!(
                "fixed target {c} is not a candidate at m = {min_m}"
            )));
        }
    }
    for (m, _) in spec.sweep.points() {
        spec.policy
            .validate(m)
            .map_err(|e| invalid(format!("at m = {m}: {e}")))?;
    }
    Ok(match &spec.distribution {
        Distribution::Ic => Ensemble::Ic,
        Distribution::Urn(p) => Ensemble::Urn(*p),
        Distribution::SinglePeaked => Ensemble::SinglePeaked,
        Distribution::SingleTroughed => Ensemble::SingleTroughed,
        Distribution::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
                path: path.clone(),
                source,
            })?;
            let records = read_profile(&text).map_err(|source| ExperimentError::Format {
                path: path.clone(),
                source,
            })?;
            match spec.sweep {
                Sweep::VaryN { m, .. } if m == records.m() => {}
                Sweep::VaryN { m, .. } => {
                    return Err(invalid(format!(
                        "records have {} candidates, sweep asks for {m}",
                        records.m()
                    )))
                }
                Sweep::VaryM { .. } => {
                    return Err(invalid("voting records fix m; sweep over n instead"))
                }
            }
            Ensemble::Records(records)
        }
    })
}

fn run_trial(spec: &SweepSpec, ensemble: &Ensemble, m: usize, n: usize, i: usize) -> Trial {
    let label = [m as u64, n as u64, i as u64];
    let profile_seed = spec.seed.derive(&[label[0], label[1], label[2], 0]);
    let target_seed = spec.seed.derive(&[label[0], label[1], label[2], 1]);
    let profile = match ensemble.sample(m, n, profile_seed) {
        Ok(p) => p,
        Err(e) => return Trial::Error(e.to_string()),
    };
    let target = match spec.target_mode {
        TargetMode::RandomCandidate => target_seed.rng().random_range(0..m),
        TargetMode::Fixed(c) => c,
    };
    let k = spec.coalition_size;

    let solved = match spec.rule {
        RuleKind::Stv if k == 0 => stv_winner(&profile, &spec.policy)
            .map(|w| (w == target, 0))
            .map_err(ManipulationError::from),
        RuleKind::Veto if k == 0 => veto_winner(&profile.sincere_vetoes(), &spec.policy)
            .map(|w| (w == target, 0))
            .map_err(ManipulationError::from),
        RuleKind::Stv => {
            let q = ManipulationQuery::constructive(profile, vec![1; k], target)
                .with_policy(spec.policy.clone());
            stv_constructive(&q, spec.node_budget).map(|o| (o.is_found(), o.stats.nodes))
        }
        RuleKind::Veto => {
            let q = ManipulationQuery::constructive(profile.sincere_vetoes(), vec![1; k], target)
                .with_policy(spec.policy.clone());
            veto_constructive_weighted(&q).map(|o| (o.is_found(), o.stats.nodes))
        }
    };
    match solved {
        Ok((true, nodes)) => Trial::Found(nodes),
        Ok((false, nodes)) => Trial::Impossible(nodes),
        Err(ManipulationError::BudgetExhausted(_)) => Trial::Undecided,
        Err(e) => Trial::Error(e.to_string()),
    }
}

/// Mean of the two middle values for even counts.
fn median(sorted: &[u64]) -> f64 {
    let len = sorted.len();
    if len % 2 == 1 {
        sorted[len / 2] as f64
    } else {
        (sorted[len / 2 - 1] as f64 + sorted[len / 2] as f64) / 2.0
    }
}

/// Nearest-rank 90th percentile.
fn p90(sorted: &[u64]) -> f64 {
    let rank = (9 * sorted.len()).div_ceil(10).max(1);
    sorted[rank - 1] as f64
}

fn aggregate(m: usize, n: usize, trials: &[Trial]) -> SweepRecord {
    let mut nodes = Vec::new();
    let (mut found, mut impossible, mut undecided, mut errors) = (0, 0, 0, 0);
    let mut error = None;
    for t in trials {
        match t {
            Trial::Found(x) => {
                found += 1;
                nodes.push(*x);
            }
            Trial::Impossible(x) => {
                impossible += 1;
                nodes.push(*x);
            }
            Trial::Undecided => undecided += 1,
            Trial::Error(e) => {
                errors += 1;
                error.get_or_insert_with(|| e.clone());
            }
        }
    }
    nodes.sort_unstable();
    let decided = nodes.len();
    let (p, mean, med, p90) = if decided == 0 {
        (f64::NAN, f64::NAN, f64::NAN, f64::NAN)
    } else {
        let sum: u128 = nodes.iter().map(|&x| x as u128).sum();
        (
            found as f64 / decided as f64,
            sum as f64 / decided as f64,
            median(&nodes),
            p90(&nodes),
        )
    };
    SweepRecord {
        m,
        n,
        trials: trials.len(),
        found,
        impossible,
        undecided,
        errors,
        p_manipulable: p,
        mean_nodes: mean,
        median_nodes: med,
        p90_nodes: p90,
        undecided_fraction: undecided as f64 / trials.len() as f64,
        bound_ratio: mean / bound(m),
        error,
    }
}

/// Runs every sweep point on the global rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, ExperimentError> {
    let ensemble = validate(spec)?;
    Ok(spec
        .sweep
        .points()
        .into_iter()
        .map(|(m, n)| {
            let trials: Vec<Trial> = (0..spec.trials)
                .into_par_iter()
                .map(|i| run_trial(spec, &ensemble, m, n, i))
                .collect();
            aggregate(m, n, &trials)
        })
        .collect())
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(
    spec: &SweepSpec,
    threads: usize,
) -> Result<Vec<SweepRecord>, ExperimentError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
    pool.install(|| run_sweep(spec))
}

/// Monte Carlo success rate with a Wilson score 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
    /// Trials that contributed.
    pub samples: usize,
}

impl Estimate {
    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }
}

pub fn wilson_interval(successes: usize, samples: usize) -> Estimate {
    let n = samples as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Estimate {
        p_hat: p,
        lo: (centre - half).max(0.0),
        hi: (centre + half).min(1.0),
        samples,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalitionSpec {
    pub rule: RuleKind,
    pub m: usize,
    pub n: usize,
    /// Unit-weight manipulators; may be zero.
    pub k: usize,
    pub distribution: Distribution,
    pub target_mode: TargetMode,
    pub trials: usize,
    pub seed: Seed,
    pub policy: TieBreakPolicy,
}

/// Probability that `k` manipulators can elect the target, with a 95%
/// interval. No closed form is assumed; the estimate is for fitting one.
pub fn estimate_coalition_success(spec: &CoalitionSpec) -> Result<Estimate, ExperimentError> {
    let sweep = SweepSpec {
        rule: spec.rule,
        distribution: spec.distribution.clone(),
        sweep: Sweep::VaryN {
            m: spec.m,
            lo: spec.n,
            hi: spec.n,
        },
        coalition_size: spec.k,
        target_mode: spec.target_mode,
        trials: spec.trials,
        node_budget: None,
        seed: spec.seed,
        policy: spec.policy.clone(),
    };
    let record = run_sweep(&sweep)?.remove(0);
    if let Some(e) = record.error {
        return Err(invalid(e));
    }
    Ok(wilson_interval(record.found, record.decided()))
}

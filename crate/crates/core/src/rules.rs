//! Single transferable vote and the veto rule.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::profile::{Candidate, Profile, VetoProfile};
use crate::tiebreak::{TieBreakError, TieBreakPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("profile has no voters")]
    EmptyProfile,
    #[error("election has no candidates")]
    EmptyCandidateSet,
    #[error(transparent)]
    TieBreak(#[from] TieBreakError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Stv,
    Veto,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::Stv => "stv",
            RuleKind::Veto => "veto",
        })
    }
}

impl FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "stv" => Ok(RuleKind::Stv),
            "veto" => Ok(RuleKind::Veto),
            _ => Err(format!("unknown rule `{s}` (expected stv or veto)")),
        }
    }
}

/// How an STV round ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundOutcome {
    Eliminated(Candidate),
    Elected(Candidate),
}

/// First-place tallies of one STV round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    /// `(candidate, tally)` for every surviving candidate, by index.
    pub tallies: Vec<(Candidate, u64)>,
    pub outcome: RoundOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StvTrace {
    pub rounds: Vec<RoundRecord>,
    pub winner: Candidate,
}

impl StvTrace {
    /// Candidates in elimination order.
    pub fn eliminations(&self) -> Vec<Candidate> {
        self.rounds
            .iter()
            .filter_map(|r| match r.outcome {
                RoundOutcome::Eliminated(c) => Some(c),
                RoundOutcome::Elected(_) => None,
            })
            .collect()
    }
}

/// Runs STV to completion.
///
/// Each round tallies every ballot for its highest-ranked surviving
/// candidate. A candidate holding strictly more than half the total weight is
/// elected; otherwise the minimum-tally candidate selected by `policy` is
/// eliminated. Weight `w` counts as `w` identical ballots.
pub fn stv_outcome(profile: &Profile, policy: &TieBreakPolicy) -> Result<StvTrace, RuleError> {
    let m = profile.m();
    if m == 0 {
        return Err(RuleError::EmptyCandidateSet);
    }
    let total = profile.total_weight();
    if total == 0 {
        return Err(RuleError::EmptyProfile);
    }
    let ranks = policy.ranks(m)?;

    let mut alive = vec![true; m];
    // Index into each ballot of its current highest surviving candidate.
    let mut cursor = vec![0usize; profile.len()];
    let mut rounds = Vec::with_capacity(m);
    loop {
        let mut tally = vec![0u64; m];
        for (i, (ballot, weight)) in profile.entries().iter().enumerate() {
            let ranking = ballot.ranking();
            while !alive[ranking[cursor[i]]] {
                cursor[i] += 1;
            }
            tally[ranking[cursor[i]]] += weight;
        }
        let tallies: Vec<(Candidate, u64)> = (0..m)
            .filter(|&c| alive[c])
            .map(|c| (c, tally[c]))
            .collect();

        if let Some(&(leader, _)) = tallies
            .iter()
            .find(|(_, t)| 2 * (*t as u128) > total as u128)
        {
            rounds.push(RoundRecord {
                tallies,
                outcome: RoundOutcome::Elected(leader),
            });
            return Ok(StvTrace {
                rounds,
                winner: leader,
            });
        }

        // Unreachable with one survivor: it holds all the weight.
        let min = tallies.iter().map(|(_, t)| *t).min().expect("a survivor");
        let loser = tallies
            .iter()
            .filter(|(_, t)| *t == min)
            .map(|(c, _)| *c)
            .min_by_key(|&c| ranks[c])
            .expect("nonempty minimum set");
        alive[loser] = false;
        rounds.push(RoundRecord {
            tallies,
            outcome: RoundOutcome::Eliminated(loser),
        });
    }
}

pub fn stv_winner(profile: &Profile, policy: &TieBreakPolicy) -> Result<Candidate, RuleError> {
    stv_outcome(profile, policy).map(|t| t.winner)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VetoTally {
    /// Weighted veto count per candidate.
    pub vetoes: Vec<u64>,
    pub winner: Candidate,
}

/// Fewest weighted vetoes wins; ties go to the policy-selected candidate.
pub fn veto_outcome(
    profile: &VetoProfile,
    policy: &TieBreakPolicy,
) -> Result<VetoTally, RuleError> {
    let m = profile.m();
    if m == 0 {
        return Err(RuleError::EmptyCandidateSet);
    }
    let vetoes = profile.counts();
    let winner = veto_winner_from_counts(&vetoes, policy)?;
    Ok(VetoTally { vetoes, winner })
}

pub(crate) fn veto_winner_from_counts(
    counts: &[u64],
    policy: &TieBreakPolicy,
) -> Result<Candidate, RuleError> {
    let min = *counts.iter().min().ok_or(RuleError::EmptyCandidateSet)?;
    let tied: Vec<Candidate> = (0..counts.len()).filter(|&c| counts[c] == min).collect();
    Ok(crate::tiebreak::break_tie(&tied, policy)?)
}

pub fn veto_winner(profile: &VetoProfile, policy: &TieBreakPolicy) -> Result<Candidate, RuleError> {
    veto_outcome(profile, policy).map(|t| t.winner)
}

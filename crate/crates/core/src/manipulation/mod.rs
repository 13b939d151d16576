//! Exact manipulation solvers.
//!
//! A [`ManipulationQuery`] fixes the sincere voters, a coalition of weighted
//! manipulators, a target and a goal. Solvers answer with a
//! [`ManipulationOutcome`]: either ballots for the coalition that achieve the
//! goal, or a proof by exhaustion that none exist. Every witness is replayed
//! through [`crate::rules`] before it is returned.
//!
//! * [`stv_constructive`]: recursive search over STV elimination orders.
//! * [`veto_constructive_weighted`]: branch and bound over veto deficits.
//! * [`veto_destructive_weighted`]: the polynomial "everyone vetoes the target" strategy.
//! * [`brute_force_manipulate`]: exhaustive oracle for any [`VotingRule`].

mod brute;
mod stv;
mod veto;

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::profile::{Ballot, Candidate, Profile, ProfileError, VetoBallot, VetoProfile};
use crate::rules::{stv_winner, veto_winner, RuleError};
use crate::tiebreak::TieBreakPolicy;

pub use brute::{
    brute_force_manipulate, CoalitionBallots, BRUTE_FORCE_LIMIT, MAX_BRUTE_FORCE_CANDIDATES,
};
pub use stv::{stv_constructive, MAX_STV_SEARCH_CANDIDATES};
pub use veto::{veto_constructive_weighted, veto_destructive_weighted};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Goal {
    /// Make the target win.
    Constructive,
    /// Make the target lose.
    Destructive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationQuery<P> {
    /// Sincere, non-manipulating voters.
    pub fixed: P,
    /// One positive weight per coalition member.
    pub coalition: Vec<u64>,
    pub target: Candidate,
    pub goal: Goal,
    pub policy: TieBreakPolicy,
}

impl<P> ManipulationQuery<P> {
    pub fn constructive(fixed: P, coalition: Vec<u64>, target: Candidate) -> Self {
        ManipulationQuery {
            fixed,
            coalition,
            target,
            goal: Goal::Constructive,
            policy: TieBreakPolicy::LexMin,
        }
    }

    pub fn destructive(fixed: P, coalition: Vec<u64>, target: Candidate) -> Self {
        ManipulationQuery {
            goal: Goal::Destructive,
            ..Self::constructive(fixed, coalition, target)
        }
    }

    pub fn with_policy(mut self, policy: TieBreakPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn coalition_weight(&self) -> u64 {
        self.coalition.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Search states expanded.
    pub nodes: u64,
    /// False only when the node budget ran out.
    pub decided: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<B> {
    /// One ballot per coalition member, in coalition order.
    Found(Vec<B>),
    Impossible,
}

impl<B> Verdict<B> {
    pub fn is_found(&self) -> bool {
        matches!(self, Verdict::Found(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationOutcome<B> {
    pub result: Verdict<B>,
    pub stats: SearchStats,
}

impl<B> ManipulationOutcome<B> {
    pub fn is_found(&self) -> bool {
        self.result.is_found()
    }

    pub fn witness(&self) -> Option<&[B]> {
        match &self.result {
            Verdict::Found(ballots) => Some(ballots),
            Verdict::Impossible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManipulationError {
    #[error("node budget exhausted after {} nodes", .0.nodes)]
    BudgetExhausted(SearchStats),
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// A voting rule the generic oracle can enumerate ballots for and evaluate.
pub trait VotingRule {
    type Ballot: Clone + fmt::Debug + PartialEq;
    type Profile: Clone + fmt::Debug;

    fn candidates(profile: &Self::Profile) -> usize;

    /// Every possible ballot over `m` candidates, in enumeration order.
    fn ballot_space(m: usize) -> Vec<Self::Ballot>;

    fn winner(profile: &Self::Profile, policy: &TieBreakPolicy) -> Result<Candidate, RuleError>;

    fn with_ballots(
        profile: &Self::Profile,
        extra: &[(Self::Ballot, u64)],
    ) -> Result<Self::Profile, ProfileError>;
}

/// Single transferable vote.
#[derive(Debug, Clone, Copy)]
pub struct Stv;

/// Veto rule.
#[derive(Debug, Clone, Copy)]
pub struct Veto;

impl VotingRule for Stv {
    type Ballot = Ballot;
    type Profile = Profile;

    fn candidates(profile: &Profile) -> usize {
        profile.m()
    }

    /// Permutations in lexicographic order.
    fn ballot_space(m: usize) -> Vec<Ballot> {
        use itertools::Itertools;
        (0..m)
            .permutations(m)
            .map(Ballot::from_permutation)
            .collect()
    }

    fn winner(profile: &Profile, policy: &TieBreakPolicy) -> Result<Candidate, RuleError> {
        stv_winner(profile, policy)
    }

    fn with_ballots(profile: &Profile, extra: &[(Ballot, u64)]) -> Result<Profile, ProfileError> {
        profile.with_ballots(extra.iter().map(|(b, w)| (b, *w)))
    }
}

impl VotingRule for Veto {
    type Ballot = VetoBallot;
    type Profile = VetoProfile;

    fn candidates(profile: &VetoProfile) -> usize {
        profile.m()
    }

    fn ballot_space(m: usize) -> Vec<VetoBallot> {
        (0..m).map(|vetoed| VetoBallot { vetoed }).collect()
    }

    fn winner(profile: &VetoProfile, policy: &TieBreakPolicy) -> Result<Candidate, RuleError> {
        veto_winner(profile, policy)
    }

    fn with_ballots(
        profile: &VetoProfile,
        extra: &[(VetoBallot, u64)],
    ) -> Result<VetoProfile, ProfileError> {
        profile.with_ballots(extra.iter().map(|(b, w)| (b, *w)))
    }
}

/// Shared query checks: nonempty positive coalition, target in range.
pub(crate) fn check_query<P>(
    query: &ManipulationQuery<P>,
    m: usize,
) -> Result<(), ManipulationError> {
    if m == 0 {
        return Err(RuleError::EmptyCandidateSet.into());
    }
    if query.coalition.is_empty() {
        return Err(ManipulationError::InvalidQuery("coalition is empty".into()));
    }
    if query.coalition.contains(&0) {
        return Err(ManipulationError::InvalidQuery(
            "coalition weights must be positive".into(),
        ));
    }
    if query.target >= m {
        return Err(ManipulationError::InvalidQuery(format!(
            "target {} out of range for {m} candidates",
            query.target
        )));
    }
    query.policy.validate(m).map_err(RuleError::from)?;
    Ok(())
}

/// Replays coalition ballots and reports whether the goal is met.
pub fn achieves_goal<R: VotingRule>(
    query: &ManipulationQuery<R::Profile>,
    ballots: &[R::Ballot],
) -> Result<bool, ManipulationError> {
    if ballots.len() != query.coalition.len() {
        return Err(ManipulationError::InvalidQuery(
            "one ballot per coalition member is required".into(),
        ));
    }
    let extra: Vec<(R::Ballot, u64)> = ballots
        .iter()
        .cloned()
        .zip(query.coalition.iter().copied())
        .collect();
    let profile = R::with_ballots(&query.fixed, &extra)?;
    let winner = R::winner(&profile, &query.policy)?;
    Ok(match query.goal {
        Goal::Constructive => winner == query.target,
        Goal::Destructive => winner != query.target,
    })
}

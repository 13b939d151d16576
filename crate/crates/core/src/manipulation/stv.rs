//! Constructive STV manipulation by one manipulator (or a coalition casting
//! one shared ballot).
//!
//! The search walks STV rounds over the set of surviving candidates. At any
//! point the manipulator's vote is either *committed* to a surviving
//! candidate (who then carries its weight until eliminated) or *free*. A free
//! vote sits, in hindsight, on whichever candidate it is eventually committed
//! to; giving weight to a candidate that is not about to be eliminated never
//! changes who is, so only two moves are distinguishable in a free round:
//!
//! 1. leave the vote free and let the would-be loser `e` go, or
//! 2. commit the vote to `e`, provided that actually saves `e`.
//!
//! Rounds with a committed vote are forced. This is the classic recursive
//! scheme whose tree has at most Fibonacci-many leaves in `m`, hence the
//! `1.62^m` worst-case bound. Each expanded round counts as one node.

use std::time::Instant;

use super::{
    achieves_goal, check_query, Goal, ManipulationError, ManipulationOutcome, ManipulationQuery,
    SearchStats, Stv, Verdict,
};
use crate::profile::{Ballot, Candidate, Profile};

/// Surviving-candidate sets are 64-bit masks.
pub const MAX_STV_SEARCH_CANDIDATES: usize = 64;

struct Exhausted;

struct Search {
    ballots: Vec<(Vec<Candidate>, u64)>,
    target: Candidate,
    /// Combined coalition weight.
    weight: u64,
    /// Sincere plus coalition weight.
    total: u128,
    /// Tie-break rank per candidate; the lowest-ranked minimum is eliminated.
    ranks: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    /// Candidates the vote was committed to, in order.
    commits: Vec<Candidate>,
    tally: Vec<u64>,
}

fn bit(c: Candidate) -> u64 {
    1u64 << c
}

impl Search {
    fn count(&mut self, remaining: u64) {
        self.tally.iter_mut().for_each(|t| *t = 0);
        for (ranking, w) in &self.ballots {
            let top = ranking
                .iter()
                .copied()
                .find(|&c| remaining & bit(c) != 0)
                .expect("a surviving candidate");
            self.tally[top] += w;
        }
    }

    fn has_majority(&self, tally: u64) -> bool {
        2 * tally as u128 > self.total
    }

    fn majority(&self, remaining: u64) -> Option<Candidate> {
        members(remaining).find(|&c| self.has_majority(self.tally[c]))
    }

    fn loser(&self, remaining: u64) -> Candidate {
        members(remaining)
            .min_by_key(|&c| (self.tally[c], self.ranks[c]))
            .expect("nonempty round")
    }

    fn visit(&mut self, remaining: u64, committed: Option<Candidate>) -> Result<bool, Exhausted> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Err(Exhausted);
        }
        let p = self.target;
        self.count(remaining);

        if let Some(c) = committed {
            self.tally[c] += self.weight;
            if let Some(x) = self.majority(remaining) {
                return Ok(x == p);
            }
            let e = self.loser(remaining);
            if e == p {
                return Ok(false);
            }
            let next = (e != c).then_some(c);
            return self.visit(remaining & !bit(e), next);
        }

        if let Some(x) = self.majority(remaining) {
            return Ok(x == p);
        }
        if self.has_majority(self.tally[p] + self.weight) {
            self.commits.push(p);
            return Ok(true);
        }
        let e = self.loser(remaining);

        // Lifting e: only a distinct branch if someone else goes instead.
        let mut lifted = None;
        if !self.has_majority(self.tally[e] + self.weight) {
            self.tally[e] += self.weight;
            let e2 = self.loser(remaining);
            if e2 != e && e2 != p {
                lifted = Some(e2);
            }
        }

        if e != p && self.visit(remaining & !bit(e), None)? {
            return Ok(true);
        }
        if let Some(e2) = lifted {
            self.commits.push(e);
            if self.visit(remaining & !bit(e2), Some(e))? {
                return Ok(true);
            }
            self.commits.pop();
        }
        Ok(false)
    }

    /// Commitments in order, then the target, then everyone else by index.
    fn witness(&self, m: usize) -> Ballot {
        let mut ranking = self.commits.clone();
        if !ranking.contains(&self.target) {
            ranking.push(self.target);
        }
        for c in 0..m {
            if !ranking.contains(&c) {
                ranking.push(c);
            }
        }
        Ballot::from_permutation(ranking)
    }
}

fn members(mask: u64) -> impl Iterator<Item = Candidate> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let c = rest.trailing_zeros() as Candidate;
        rest &= rest - 1;
        Some(c)
    })
}

/// Decides whether the coalition, all casting the same ballot, can make the
/// target win under STV.
///
/// Complete and sound: `Found` carries a ballot per member (all equal) that
/// is replayed through STV before returning, and `Impossible` means no
/// ballot works. With `node_budget = Some(b)` the search stops after `b`
/// nodes with [`ManipulationError::BudgetExhausted`].
pub fn stv_constructive(
    query: &ManipulationQuery<Profile>,
    node_budget: Option<u64>,
) -> Result<ManipulationOutcome<Ballot>, ManipulationError> {
    let start = Instant::now();
    let m = query.fixed.m();
    check_query(query, m)?;
    if query.goal != Goal::Constructive {
        return Err(ManipulationError::InvalidQuery(
            "the STV search answers constructive queries".into(),
        ));
    }
    if m > MAX_STV_SEARCH_CANDIDATES {
        return Err(ManipulationError::InvalidQuery(format!(
            "STV search supports at most {MAX_STV_SEARCH_CANDIDATES} candidates"
        )));
    }
    let weight = query
        .coalition
        .iter()
        .try_fold(0u64, |acc, w| acc.checked_add(*w))
        .ok_or_else(|| ManipulationError::InvalidQuery("coalition weight overflows".into()))?;

    let mut search = Search {
        ballots: query
            .fixed
            .entries()
            .iter()
            .map(|(b, w)| (b.ranking().to_vec(), *w))
            .collect(),
        target: query.target,
        weight,
        total: query.fixed.total_weight() as u128 + weight as u128,
        ranks: query
            .policy
            .ranks(m)
            .map_err(crate::rules::RuleError::from)?,
        nodes: 0,
        budget: node_budget,
        commits: Vec::new(),
        tally: vec![0; m],
    };
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let found = search.visit(all, None);

    let mut stats = SearchStats {
        nodes: search.nodes,
        decided: true,
        elapsed: start.elapsed(),
    };
    let result = match found {
        Err(Exhausted) => {
            stats.decided = false;
            return Err(ManipulationError::BudgetExhausted(stats));
        }
        Ok(false) => Verdict::Impossible,
        Ok(true) => {
            let ballots = vec![search.witness(m); query.coalition.len()];
            assert!(
                achieves_goal::<Stv>(query, &ballots)?,
                "STV witness failed replay"
            );
            Verdict::Found(ballots)
        }
    };
    Ok(ManipulationOutcome { result, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manipulation::{brute_force_manipulate, CoalitionBallots};
    use crate::rules::stv_winner;
    use crate::tiebreak::TieBreakPolicy;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;

    #[test]
    fn sole_voter_always_succeeds() {
        for target in 0..4 {
            let q = ManipulationQuery::constructive(Profile::new(4), vec![1], target);
            let out = stv_constructive(&q, None).unwrap();
            assert_eq!(out.witness().unwrap()[0].top(), Some(target));
            assert!(out.stats.nodes >= 1);
        }
    }

    #[test]
    fn unreachable_majority() {
        let fixed = Profile::from_weighted(2, [(vec![B, A], 3)]).unwrap();
        let q = ManipulationQuery::constructive(fixed, vec![1], A);
        assert_eq!(
            stv_constructive(&q, None).unwrap().result,
            Verdict::Impossible
        );
    }

    #[test]
    fn agrees_with_brute_force_on_fixed_example() {
        let fixed = Profile::from_weighted(3, [(vec![B, A, C], 2), (vec![C, A, B], 2)]).unwrap();
        for target in [A, B, C] {
            let q = ManipulationQuery::constructive(fixed.clone(), vec![1], target);
            let search = stv_constructive(&q, None).unwrap();
            let oracle = brute_force_manipulate::<Stv>(&q, CoalitionBallots::Identical).unwrap();
            assert_eq!(search.is_found(), oracle.is_found(), "target {target}");
        }
        // A has no first places and is eliminated whatever one voter does.
        let q = ManipulationQuery::constructive(fixed, vec![1], A);
        assert!(!stv_constructive(&q, None).unwrap().is_found());
    }

    #[test]
    fn saving_a_candidate_changes_the_elimination_order() {
        // A: 2, B: 3, C: 3, D: 1 first places; D transfers to A.
        // Sincerely D goes, then A (3 vs 3 vs 3 ties resolve to A), ...
        let fixed = Profile::from_weighted(
            4,
            [
                (vec![0, 1, 2, 3], 2),
                (vec![1, 2, 0, 3], 3),
                (vec![2, 1, 0, 3], 3),
                (vec![3, 0, 1, 2], 1),
            ],
        )
        .unwrap();
        for target in 0..4 {
            let q = ManipulationQuery::constructive(fixed.clone(), vec![1], target);
            let search = stv_constructive(&q, None).unwrap();
            let oracle = brute_force_manipulate::<Stv>(&q, CoalitionBallots::Identical).unwrap();
            assert_eq!(search.is_found(), oracle.is_found(), "target {target}");
            if let Some(w) = search.witness() {
                let p = fixed.with_ballots([(&w[0], 1)]).unwrap();
                assert_eq!(stv_winner(&p, &TieBreakPolicy::LexMin).unwrap(), target);
            }
        }
    }

    #[test]
    fn budget_is_reported_not_conflated() {
        let fixed = crate::generators::impartial_culture(9, 12, crate::seed::Seed(4));
        let q = ManipulationQuery::constructive(fixed, vec![1], 3);
        let full = stv_constructive(&q, None).unwrap();
        match stv_constructive(&q, Some(0)) {
            Err(ManipulationError::BudgetExhausted(stats)) => {
                assert!(!stats.decided);
                assert_eq!(stats.nodes, 1);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
        let capped = stv_constructive(&q, Some(full.stats.nodes)).unwrap();
        assert_eq!(capped.result, full.result);
        assert_eq!(capped.stats.nodes, full.stats.nodes);
    }

    #[test]
    fn coalition_casts_identical_ballots() {
        let fixed = Profile::from_weighted(3, [(vec![B, A, C], 2), (vec![C, B, A], 2)]).unwrap();
        let q = ManipulationQuery::constructive(fixed, vec![1, 2], A);
        let out = stv_constructive(&q, None).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w[0], w[1]);
    }

    #[test]
    fn rejects_destructive_queries() {
        let q = ManipulationQuery::destructive(Profile::new(3), vec![1], 0);
        assert!(matches!(
            stv_constructive(&q, None),
            Err(ManipulationError::InvalidQuery(_))
        ));
    }

    #[test]
    fn members_iterates_set_bits() {
        assert_eq!(members(0b1011).collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(members(0).count(), 0);
    }
}

//! Weighted coalition manipulation of the veto rule.

use std::collections::HashSet;
use std::time::Instant;

use super::{
    achieves_goal, check_query, Goal, ManipulationError, ManipulationOutcome, ManipulationQuery,
    SearchStats, Verdict, Veto,
};
use crate::profile::{Candidate, VetoBallot, VetoProfile};
use crate::rules::RuleError;

fn expect_goal(
    query: &ManipulationQuery<VetoProfile>,
    goal: Goal,
) -> Result<(), ManipulationError> {
    if query.goal != goal {
        return Err(ManipulationError::InvalidQuery(format!(
            "expected a {goal:?} query, got {:?}",
            query.goal
        )));
    }
    Ok(())
}

fn finish(
    query: &ManipulationQuery<VetoProfile>,
    found: Option<Vec<Candidate>>,
    nodes: u64,
    start: Instant,
) -> Result<ManipulationOutcome<VetoBallot>, ManipulationError> {
    let result = match found {
        Some(vetoes) => {
            let ballots: Vec<VetoBallot> = vetoes
                .into_iter()
                .map(|vetoed| VetoBallot { vetoed })
                .collect();
            assert!(
                achieves_goal::<Veto>(query, &ballots)?,
                "veto witness failed replay"
            );
            Verdict::Found(ballots)
        }
        None => Verdict::Impossible,
    };
    Ok(ManipulationOutcome {
        result,
        stats: SearchStats {
            nodes,
            decided: true,
            elapsed: start.elapsed(),
        },
    })
}

struct DeficitSearch {
    /// `(member, weight)`, heaviest first.
    members: Vec<(usize, u64)>,
    /// Weight still unassigned from position `i` onwards.
    suffix: Vec<u64>,
    /// Extra vetoes each candidate still needs; zero for the target.
    deficit: Vec<u64>,
    choice: Vec<Candidate>,
    /// Rival vetoed by members not needed for covering.
    dump: Candidate,
    failed: HashSet<(Vec<u64>, usize)>,
    nodes: u64,
}

impl DeficitSearch {
    fn dfs(&mut self, i: usize) -> bool {
        self.nodes += 1;
        let need: u64 = self.deficit.iter().sum();
        if need == 0 {
            let dump = self.dump;
            self.choice[i..].iter_mut().for_each(|c| *c = dump);
            return true;
        }
        if i == self.members.len() || self.suffix[i] < need {
            return false;
        }
        let mut key: Vec<u64> = self.deficit.iter().copied().filter(|&d| d > 0).collect();
        key.sort_unstable();
        let key = (key, i);
        if self.failed.contains(&key) {
            return false;
        }

        let w = self.members[i].1;
        // Largest deficit first; candidates with equal deficits are interchangeable.
        let mut order: Vec<Candidate> = (0..self.deficit.len())
            .filter(|&c| self.deficit[c] > 0)
            .collect();
        order.sort_by_key(|&c| (std::cmp::Reverse(self.deficit[c]), c));
        order.dedup_by_key(|c| self.deficit[*c]);
        for c in order {
            let before = self.deficit[c];
            self.deficit[c] = before.saturating_sub(w);
            self.choice[i] = c;
            if self.dfs(i + 1) {
                return true;
            }
            self.deficit[c] = before;
        }
        self.failed.insert(key);
        false
    }
}

/// Exact constructive manipulation of weighted veto.
///
/// Members never veto the target `p`. With sincere counts `f`, `p` wins iff
/// every rival `c` ends with `t(c) > f(p)`, or `t(c) = f(p)` and the policy
/// prefers `p` to `c`. That leaves a covering problem: split the coalition
/// weights over rivals so each rival's deficit is met. It is solved by depth
/// first search assigning members heaviest first, pruning when the remaining
/// weight cannot cover the remaining deficit, and memoising failed
/// `(sorted deficits, member index)` states. Members not needed for covering
/// veto the lowest-indexed rival.
pub fn veto_constructive_weighted(
    query: &ManipulationQuery<VetoProfile>,
) -> Result<ManipulationOutcome<VetoBallot>, ManipulationError> {
    let start = Instant::now();
    let m = query.fixed.m();
    check_query(query, m)?;
    expect_goal(query, Goal::Constructive)?;
    let p = query.target;
    let k = query.coalition.len();
    if m == 1 {
        return finish(query, Some(vec![p; k]), 1, start);
    }

    let f = query.fixed.counts();
    let mut deficit = vec![0u64; m];
    for c in (0..m).filter(|&c| c != p) {
        let p_wins_tie = query.policy.prefers(p, c).map_err(RuleError::from)?;
        let required = f[p] + u64::from(!p_wins_tie);
        deficit[c] = required.saturating_sub(f[c]);
    }

    let mut members: Vec<(usize, u64)> = query.coalition.iter().copied().enumerate().collect();
    members.sort_by_key(|&(i, w)| (std::cmp::Reverse(w), i));
    let mut suffix = vec![0u64; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1].saturating_add(members[i].1);
    }
    let dump = if p == 0 { 1 } else { 0 };
    let mut search = DeficitSearch {
        members,
        suffix,
        deficit,
        choice: vec![dump; k],
        dump,
        failed: HashSet::new(),
        nodes: 0,
    };
    let found = search.dfs(0).then(|| {
        let mut vetoes = vec![dump; k];
        for (pos, &(member, _)) in search.members.iter().enumerate() {
            vetoes[member] = search.choice[pos];
        }
        vetoes
    });
    finish(query, found, search.nodes, start)
}

/// Destructive manipulation of weighted veto in linear time.
///
/// Every member vetoes the target: that maximises the target's count while
/// leaving every rival's count minimal, so if it fails, nothing succeeds.
pub fn veto_destructive_weighted(
    query: &ManipulationQuery<VetoProfile>,
) -> Result<ManipulationOutcome<VetoBallot>, ManipulationError> {
    let start = Instant::now();
    let m = query.fixed.m();
    check_query(query, m)?;
    expect_goal(query, Goal::Destructive)?;
    let p = query.target;
    let mut counts = query.fixed.counts();
    counts[p] += query.coalition_weight();
    let winner = crate::rules::veto_winner_from_counts(&counts, &query.policy)?;
    let found = (winner != p).then(|| vec![p; query.coalition.len()]);
    finish(query, found, 1, start)
}

//! Round robins: every pair meets once, a win is worth one point.
//!
//! Both solvers route one unit of flow per game to one of its achievable
//! winners, with each team's capacity set to the points it may collect
//! without overtaking the target. For a chosen final score `W` of the target,
//! the target's edge to the sink carries a large negative cost, so a minimum
//! cost flow first gives the target as many wins as it can (up to `W`) and
//! then throws as few games as possible.

use super::flow::MinCostFlow;
use super::{
    achievable_winners, can_beat, check_coalition, BeatsModel, Coalition, Team, TournamentError,
};
use crate::tiebreak::TieBreakPolicy;

/// When the target counts as the winner of the round robin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum RrWinCondition {
    /// Strictly more points than every other team.
    #[default]
    Strict,
    /// Most points, with ties resolved by the policy.
    TieBreak(TieBreakPolicy),
}

impl RrWinCondition {
    /// Does `target` win with these final scores?
    pub fn target_wins(&self, scores: &[u64], target: Team) -> Result<bool, TournamentError> {
        let best = scores.iter().copied().max().unwrap_or(0);
        if scores[target] != best {
            return Ok(false);
        }
        let tied: Vec<Team> = (0..scores.len()).filter(|&x| scores[x] == best).collect();
        match self {
            RrWinCondition::Strict => Ok(tied.len() == 1),
            RrWinCondition::TieBreak(policy) => crate::tiebreak::break_tie(&tied, policy)
                .map(|w| w == target)
                .map_err(|e| TournamentError::InvalidModel(e.to_string())),
        }
    }

    /// Most points `other` may finish with when the target has `w`.
    fn cap(&self, target: Team, other: Team, w: u64) -> i64 {
        let ties_ok = match self {
            RrWinCondition::Strict => false,
            RrWinCondition::TieBreak(policy) => policy.prefers(target, other).unwrap_or(false),
        };
        w as i64 - i64::from(!ties_ok)
    }

    fn validate(&self, t: usize) -> Result<(), TournamentError> {
        match self {
            RrWinCondition::Strict => Ok(()),
            RrWinCondition::TieBreak(policy) => policy
                .validate(t)
                .map_err(|e| TournamentError::InvalidModel(e.to_string())),
        }
    }
}

/// A full set of game results that makes the target win.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrWitness {
    /// `(i, j, winner)` for every pair `i < j`, in lexicographic order.
    pub results: Vec<(Team, Team, Team)>,
    pub scores: Vec<u64>,
    /// Games won by the side that would honestly lose.
    pub throws: u64,
}

fn games(t: usize) -> Vec<(Team, Team)> {
    (0..t)
        .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
        .collect()
}

/// Cheapest assignment in which the target finishes on exactly `w` points.
fn solve_at(
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    cond: &RrWinCondition,
    w: u64,
) -> Option<RrWitness> {
    let t = model.teams();
    let pairs = games(t);
    let g = pairs.len();
    let big = g as i64 + 1;
    let (source, sink) = (0, g + t + 1);
    let team_node = |x: Team| g + 1 + x;

    let mut net = MinCostFlow::new(g + t + 2);
    let mut routes = Vec::with_capacity(g);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        net.add_edge(source, k + 1, 1, 0);
        let honest = model.beats(i, j);
        let options: Vec<(Team, usize)> = achievable_winners(model, coalition, i, j)
            .into_iter()
            .map(|x| {
                (
                    x,
                    net.add_edge(k + 1, team_node(x), 1, i64::from(x != honest)),
                )
            })
            .collect();
        routes.push(options);
    }
    let mut target_edge = 0;
    for x in 0..t {
        if x == target {
            target_edge = net.add_edge(team_node(x), sink, w as i64, -big);
        } else {
            let cap = cond.cap(target, x, w);
            if cap < 0 {
                return None;
            }
            net.add_edge(team_node(x), sink, cap, 0);
        }
    }
    let (flow, cost) = net.run(source, sink, g as i64);
    if flow < g as i64 || net.flow(target_edge) != w as i64 {
        return None;
    }

    let mut scores = vec![0u64; t];
    let results = pairs
        .iter()
        .zip(&routes)
        .map(|(&(i, j), options)| {
            let winner = options
                .iter()
                .find(|&&(_, e)| net.flow(e) == 1)
                .map(|&(x, _)| x)
                .expect("every game routed");
            scores[winner] += 1;
            (i, j, winner)
        })
        .collect();
    Some(RrWitness {
        results,
        scores,
        throws: (cost + big * w as i64) as u64,
    })
}

fn check(
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    cond: &RrWinCondition,
) -> Result<(), TournamentError> {
    check_coalition(model, coalition)?;
    model.check_team(target)?;
    cond.validate(model.teams())
}

/// Game results that make `target` win, or `None` if no throws can.
///
/// The target wins every game it can, which only raises its score and lowers
/// a rival's, so a single flow at that score decides feasibility. Among
/// witnesses at that score, the one returned throws fewest games.
pub fn rr_can_win(
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    cond: &RrWinCondition,
) -> Result<Option<RrWitness>, TournamentError> {
    check(model, coalition, target, cond)?;
    let w = (0..model.teams())
        .filter(|&j| j != target && can_beat(model, coalition, target, j))
        .count() as u64;
    Ok(solve_at(model, coalition, target, cond, w))
}

/// A witness with the fewest thrown games over every final score of the target.
pub fn rr_min_throws_witness(
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    cond: &RrWinCondition,
) -> Result<Option<RrWitness>, TournamentError> {
    check(model, coalition, target, cond)?;
    let t = model.teams() as u64;
    let mut best: Option<RrWitness> = None;
    for w in 0..t.max(1) {
        if let Some(found) = solve_at(model, coalition, target, cond, w) {
            if best.as_ref().is_none_or(|b| found.throws < b.throws) {
                best = Some(found);
            }
        }
    }
    Ok(best)
}

/// Fewest thrown games that make `target` win, or `None` if impossible.
pub fn rr_min_throws(
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    cond: &RrWinCondition,
) -> Result<Option<u64>, TournamentError> {
    rr_min_throws_witness(model, coalition, target, cond).map(|w| w.map(|w| w.throws))
}

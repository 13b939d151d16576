//! Balanced knockout cups.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{can_beat, check_coalition, BeatsModel, Coalition, Team, TournamentError};
use crate::profile::validate_ballot;
use crate::seed::Seed;

/// Draw of a knockout cup: leaf `2k` meets leaf `2k + 1` in the first round,
/// the winners of games `2k` and `2k + 1` meet in the next, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bracket {
    leaves: Vec<Team>,
}

impl Bracket {
    pub fn new(leaves: Vec<Team>) -> Result<Self, TournamentError> {
        let t = leaves.len();
        if !t.is_power_of_two() {
            return Err(TournamentError::NotPowerOfTwo(t));
        }
        validate_ballot(&leaves, t).map_err(|e| TournamentError::InvalidBracket(e.to_string()))?;
        Ok(Bracket { leaves })
    }

    /// Teams in index order: 0 v 1, 2 v 3, ...
    pub fn identity(t: usize) -> Result<Self, TournamentError> {
        Self::new((0..t).collect())
    }

    pub fn random(t: usize, seed: Seed) -> Result<Self, TournamentError> {
        let mut leaves: Vec<Team> = (0..t).collect();
        leaves.shuffle(&mut seed.rng());
        Self::new(leaves)
    }

    pub fn leaves(&self) -> &[Team] {
        &self.leaves
    }

    pub fn teams(&self) -> usize {
        self.leaves.len()
    }

    fn check(&self, model: &BeatsModel) -> Result<(), TournamentError> {
        if self.teams() != model.teams() {
            return Err(TournamentError::SizeMismatch {
                model: model.teams(),
                what: "bracket",
                other: self.teams(),
            });
        }
        Ok(())
    }

    /// Bottom-up evaluation: `leaf` seeds each leaf, `merge` combines sibling
    /// values. Returns every level, leaves first, root last.
    fn fold<T>(&self, leaf: impl Fn(Team) -> T, merge: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
        let mut levels = vec![self.leaves.iter().map(|&x| leaf(x)).collect::<Vec<T>>()];
        while levels.last().map_or(0, Vec::len) > 1 {
            let below = levels.last().expect("nonempty");
            let next = below
                .chunks(2)
                .map(|pair| merge(&pair[0], &pair[1]))
                .collect();
            levels.push(next);
        }
        levels
    }
}

/// Achievable winners of every subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibleWinners {
    /// `levels[0]` are the leaves, the last level is the root. Each node's
    /// set is sorted.
    pub levels: Vec<Vec<Vec<Team>>>,
}

impl PossibleWinners {
    pub fn root(&self) -> &[Team] {
        &self.levels.last().expect("at least one level")[0]
    }

    pub fn can_win(&self, team: Team) -> bool {
        self.root().binary_search(&team).is_ok()
    }
}

/// Which teams the coalition can steer to victory, node by node.
pub fn cup_possible_winners(
    bracket: &Bracket,
    model: &BeatsModel,
    coalition: &Coalition,
) -> Result<PossibleWinners, TournamentError> {
    bracket.check(model)?;
    check_coalition(model, coalition)?;
    let levels = bracket.fold(
        |x| vec![x],
        |left: &Vec<Team>, right: &Vec<Team>| {
            let side = |mine: &[Team], theirs: &[Team]| -> Vec<Team> {
                mine.iter()
                    .copied()
                    .filter(|&x| theirs.iter().any(|&y| can_beat(model, coalition, x, y)))
                    .collect::<Vec<_>>()
            };
            let mut set = side(left, right);
            set.extend(side(right, left));
            set.sort_unstable();
            set
        },
    );
    Ok(PossibleWinners { levels })
}

/// Winner when nobody throws.
pub fn cup_honest_winner(bracket: &Bracket, model: &BeatsModel) -> Result<Team, TournamentError> {
    bracket.check(model)?;
    let levels = bracket.fold(|x| x, |&a: &Team, &b: &Team| model.beats(a, b));
    Ok(levels.last().expect("root")[0])
}

/// Fewest thrown games that make `target` win the cup, or `None` if no
/// choice of throws does.
pub fn cup_min_throws(
    bracket: &Bracket,
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
) -> Result<Option<u64>, TournamentError> {
    bracket.check(model)?;
    check_coalition(model, coalition)?;
    model.check_team(target)?;
    // Per node: (team, cheapest way for it to win the subtree).
    let levels = bracket.fold(
        |x| vec![(x, 0u64)],
        |left: &Vec<(Team, u64)>, right: &Vec<(Team, u64)>| {
            let side = |mine: &[(Team, u64)], theirs: &[(Team, u64)]| {
                mine.iter()
                    .filter_map(|&(x, cx)| {
                        theirs
                            .iter()
                            .filter(|&&(y, _)| can_beat(model, coalition, x, y))
                            .map(|&(y, cy)| cx + cy + u64::from(model.beats(x, y) != x))
                            .min()
                            .map(|c| (x, c))
                    })
                    .collect::<Vec<_>>()
            };
            let mut out = side(left, right);
            out.extend(side(right, left));
            out
        },
    );
    Ok(levels.last().expect("root")[0]
        .iter()
        .find(|&&(x, _)| x == target)
        .map(|&(_, c)| c))
}

/// How coalition members play in the probabilistic cup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ThrowPolicy {
    /// Members lose for certain against the target and play honestly
    /// against everyone else.
    #[default]
    ThrowToTarget,
    Honest,
}

/// Chance that `x` wins a game against `y`.
fn game_prob(
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    policy: ThrowPolicy,
    x: Team,
    y: Team,
) -> f64 {
    if policy == ThrowPolicy::ThrowToTarget {
        if x == target && coalition.contains(y) {
            return 1.0;
        }
        if y == target && coalition.contains(x) {
            return 0.0;
        }
    }
    model.prob(x, y).expect("probabilities checked")
}

fn check_probabilistic(
    bracket: &Bracket,
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
) -> Result<(), TournamentError> {
    bracket.check(model)?;
    check_coalition(model, coalition)?;
    model.check_team(target)?;
    if !model.has_probabilities() {
        return Err(TournamentError::MissingProbabilities);
    }
    Ok(())
}

/// Probability of winning the cup for every team, indexed by team.
pub fn cup_win_distribution(
    bracket: &Bracket,
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    policy: ThrowPolicy,
) -> Result<Vec<f64>, TournamentError> {
    check_probabilistic(bracket, model, coalition, target)?;
    let q = |x, y| game_prob(model, coalition, target, policy, x, y);
    let levels = bracket.fold(
        |x| vec![(x, 1.0f64)],
        |left: &Vec<(Team, f64)>, right: &Vec<(Team, f64)>| {
            let side = |mine: &[(Team, f64)], theirs: &[(Team, f64)]| {
                mine.iter()
                    .map(|&(x, px)| {
                        (
                            x,
                            px * theirs.iter().map(|&(y, py)| py * q(x, y)).sum::<f64>(),
                        )
                    })
                    .collect::<Vec<_>>()
            };
            let mut out = side(left, right);
            out.extend(side(right, left));
            out
        },
    );
    let mut dist = vec![0.0; model.teams()];
    for &(x, p) in &levels.last().expect("root")[0] {
        dist[x] = p;
    }
    Ok(dist)
}

/// Probability that `target` wins the cup.
pub fn cup_win_probability(
    bracket: &Bracket,
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    policy: ThrowPolicy,
) -> Result<f64, TournamentError> {
    cup_win_distribution(bracket, model, coalition, target, policy).map(|d| d[target])
}

/// Plays one cup at random under the throw policy and returns its winner.
pub fn simulate_cup(
    bracket: &Bracket,
    model: &BeatsModel,
    coalition: &Coalition,
    target: Team,
    policy: ThrowPolicy,
    rng: &mut impl Rng,
) -> Result<Team, TournamentError> {
    check_probabilistic(bracket, model, coalition, target)?;
    let mut alive = bracket.leaves().to_vec();
    while alive.len() > 1 {
        alive = alive
            .chunks(2)
            .map(|g| {
                let (x, y) = (g[0], g[1]);
                if rng.random::<f64>() < game_prob(model, coalition, target, policy, x, y) {
                    x
                } else {
                    y
                }
            })
            .collect();
    }
    Ok(alive[0])
}

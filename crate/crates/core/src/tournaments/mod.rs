//! Fixing tournaments by throwing games.
//!
//! A [`BeatsModel`] says who wins each pairing when both sides try. A
//! [`Coalition`] of teams may lose on purpose, so in a game `{i, j}` the
//! achievable winners are the honest winner plus any side whose opponent is
//! a coalition member. Nobody can win a game they would honestly lose unless
//! the opponent throws it.
//!
//! * Cups: [`cup_possible_winners`], [`cup_min_throws`], [`cup_win_probability`].
//! * Round robins: [`rr_can_win`], [`rr_min_throws`].

mod cup;
mod flow;
mod round_robin;

use rand::Rng;
use thiserror::Error;

use crate::seed::Seed;

pub use cup::{
    cup_honest_winner, cup_min_throws, cup_possible_winners, cup_win_distribution,
    cup_win_probability, simulate_cup, Bracket, PossibleWinners, ThrowPolicy,
};
pub use round_robin::{
    rr_can_win, rr_min_throws, rr_min_throws_witness, RrWinCondition, RrWitness,
};

pub type Team = usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TournamentError {
    #[error("a cup needs a power-of-two field, got {0} teams")]
    NotPowerOfTwo(usize),
    #[error("team {team} is out of range for {t} teams")]
    InvalidTeam { team: Team, t: usize },
    #[error("invalid bracket: {0}")]
    InvalidBracket(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("the model has no win probabilities")]
    MissingProbabilities,
    #[error("size mismatch: model has {model} teams, {what} has {other}")]
    SizeMismatch {
        model: usize,
        what: &'static str,
        other: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Honest game results, optionally with win probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatsModel {
    t: usize,
    /// `winner[i * t + j]` for `i != j`.
    winner: Vec<Team>,
    /// `prob[i * t + j]` is the chance `i` beats `j`.
    prob: Option<Vec<f64>>,
}

impl BeatsModel {
    /// `f(i, j)` is called once per pair with `i < j` and must return `i` or `j`.
    pub fn from_fn(t: usize, f: impl Fn(Team, Team) -> Team) -> Result<Self, TournamentError> {
        let mut winner = vec![0; t * t];
        for i in 0..t {
            for j in i + 1..t {
                let w = f(i, j);
                if w != i && w != j {
                    return Err(TournamentError::InvalidModel(format!(
                        "winner of {i} v {j} given as {w}"
                    )));
                }
                winner[i * t + j] = w;
                winner[j * t + i] = w;
            }
        }
        Ok(BeatsModel {
            t,
            winner,
            prob: None,
        })
    }

    /// Every unordered pair exactly once, as `(i, j, winner)`.
    pub fn from_results(
        t: usize,
        results: impl IntoIterator<Item = (Team, Team, Team)>,
    ) -> Result<Self, TournamentError> {
        let mut seen = vec![None; t * t];
        for (i, j, w) in results {
            for x in [i, j, w] {
                check_team(x, t)?;
            }
            if i == j || (w != i && w != j) {
                return Err(TournamentError::InvalidModel(format!(
                    "bad result {i} {j} {w}"
                )));
            }
            if seen[i * t + j].is_some() {
                return Err(TournamentError::InvalidModel(format!(
                    "{i} v {j} given twice"
                )));
            }
            seen[i * t + j] = Some(w);
            seen[j * t + i] = Some(w);
        }
        Self::from_fn(t, |i, j| seen[i * t + j].unwrap_or(usize::MAX))
            .map_err(|_| TournamentError::InvalidModel("every pair needs a result".into()))
    }

    /// Honest winners taken from probabilities: `p(i, j) > 1/2` means `i`
    /// wins, an even game goes to the lower index.
    pub fn from_probabilities(
        t: usize,
        p: impl Fn(Team, Team) -> f64,
    ) -> Result<Self, TournamentError> {
        let model = Self::from_fn(t, |i, j| if p(i, j) >= 0.5 { i } else { j })?;
        model.with_probabilities(p)
    }

    /// Attaches probabilities; `p(i, j)` is read for `i < j` only and
    /// `p(j, i) = 1 - p(i, j)`.
    pub fn with_probabilities(
        mut self,
        p: impl Fn(Team, Team) -> f64,
    ) -> Result<Self, TournamentError> {
        let t = self.t;
        let mut prob = vec![0.0; t * t];
        for i in 0..t {
            for j in i + 1..t {
                let x = p(i, j);
                if !(0.0..=1.0).contains(&x) {
                    return Err(TournamentError::InvalidModel(format!(
                        "probability {x} for {i} v {j} outside [0, 1]"
                    )));
                }
                prob[i * t + j] = x;
                prob[j * t + i] = 1.0 - x;
            }
        }
        self.prob = Some(prob);
        Ok(self)
    }

    /// Uniform probabilities with winners taken from them.
    pub fn random(t: usize, seed: Seed) -> Self {
        let mut rng = seed.rng();
        let draws: Vec<f64> = (0..t * t).map(|_| rng.random()).collect();
        Self::from_probabilities(t, |i, j| draws[i * t + j]).expect("draws lie in [0, 1)")
    }

    pub fn teams(&self) -> usize {
        self.t
    }

    /// Honest winner of `i` against `j`.
    pub fn beats(&self, i: Team, j: Team) -> Team {
        debug_assert!(i != j);
        self.winner[i * self.t + j]
    }

    /// Chance that `i` beats `j` when both play honestly.
    pub fn prob(&self, i: Team, j: Team) -> Option<f64> {
        self.prob.as_ref().map(|p| p[i * self.t + j])
    }

    pub fn has_probabilities(&self) -> bool {
        self.prob.is_some()
    }

    pub(crate) fn check_team(&self, team: Team) -> Result<(), TournamentError> {
        check_team(team, self.t)
    }
}

fn check_team(team: Team, t: usize) -> Result<(), TournamentError> {
    if team < t {
        Ok(())
    } else {
        Err(TournamentError::InvalidTeam { team, t })
    }
}

/// Teams willing to lose on purpose.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coalition {
    members: Vec<bool>,
}

impl Coalition {
    pub fn new(t: usize, members: impl IntoIterator<Item = Team>) -> Result<Self, TournamentError> {
        let mut flags = vec![false; t];
        for m in members {
            check_team(m, t)?;
            flags[m] = true;
        }
        Ok(Coalition { members: flags })
    }

    pub fn empty(t: usize) -> Self {
        Coalition {
            members: vec![false; t],
        }
    }

    pub fn contains(&self, team: Team) -> bool {
        self.members.get(team).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, team: Team) {
        self.members[team] = true;
    }

    pub fn members(&self) -> Vec<Team> {
        (0..self.members.len())
            .filter(|&i| self.members[i])
            .collect()
    }

    pub fn teams(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.contains(&true)
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        (0..self.members.len()).all(|i| !self.members[i] || other.contains(i))
    }
}

fn check_coalition(model: &BeatsModel, coalition: &Coalition) -> Result<(), TournamentError> {
    if coalition.teams() != model.teams() {
        return Err(TournamentError::SizeMismatch {
            model: model.teams(),
            what: "coalition",
            other: coalition.teams(),
        });
    }
    Ok(())
}

/// Can `x` come out of a game against `y`?
pub fn can_beat(model: &BeatsModel, coalition: &Coalition, x: Team, y: Team) -> bool {
    model.beats(x, y) == x || coalition.contains(y)
}

/// Achievable winners of the game `{i, j}`, in increasing order.
pub fn achievable_winners(
    model: &BeatsModel,
    coalition: &Coalition,
    i: Team,
    j: Team,
) -> Vec<Team> {
    let (lo, hi) = (i.min(j), i.max(j));
    [lo, hi]
        .into_iter()
        .filter(|&x| can_beat(model, coalition, x, if x == lo { hi } else { lo }))
        .collect()
}

/// Reads a team file: the team count, then one `i j x` line per game.
///
/// `x` is the honest winner when it is an integer and the probability that
/// `i` beats `j` when it contains `.` or `e`. Pairs with only a probability
/// get their honest winner from it; probabilities must cover every pair or
/// none. `#` starts a comment.
pub fn parse_teams(text: &str) -> Result<BeatsModel, TournamentError> {
    let err = |line: usize, message: String| TournamentError::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, first) = lines
        .next()
        .ok_or_else(|| err(1, "missing team count".into()))?;
    let t: usize = first
        .parse()
        .map_err(|_| err(line, format!("expected the team count, got `{first}`")))?;

    let mut winners: Vec<Option<Team>> = vec![None; t * t];
    let mut probs: Vec<Option<f64>> = vec![None; t * t];
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [i, j, x] = fields[..] else {
            return Err(err(
                line,
                format!("expected `i j winner` or `i j p`, got `{text}`"),
            ));
        };
        let team = |s: &str| -> Result<Team, TournamentError> {
            let v: Team = s
                .parse()
                .map_err(|_| err(line, format!("bad team `{s}`")))?;
            check_team(v, t).map_err(|e| err(line, e.to_string()))?;
            Ok(v)
        };
        let (i, j) = (team(i)?, team(j)?);
        if i == j {
            return Err(err(line, format!("team {i} cannot play itself")));
        }
        if x.contains(['.', 'e', 'E']) {
            let p: f64 = x
                .parse()
                .map_err(|_| err(line, format!("bad probability `{x}`")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(err(line, format!("probability {p} outside [0, 1]")));
            }
            if probs[i * t + j].is_some() {
                return Err(err(line, format!("probability for {i} v {j} given twice")));
            }
            probs[i * t + j] = Some(p);
            probs[j * t + i] = Some(1.0 - p);
        } else {
            let w = team(x)?;
            if w != i && w != j {
                return Err(err(line, format!("winner {w} is not in {i} v {j}")));
            }
            if winners[i * t + j].is_some() {
                return Err(err(line, format!("result for {i} v {j} given twice")));
            }
            winners[i * t + j] = Some(w);
            winners[j * t + i] = Some(w);
        }
    }

    let pairs = t * t.saturating_sub(1) / 2;
    let with_prob = probs.iter().filter(|p| p.is_some()).count() / 2;
    if with_prob != 0 && with_prob != pairs {
        return Err(TournamentError::InvalidModel(format!(
            "probabilities given for {with_prob} of {pairs} games"
        )));
    }
    for i in 0..t {
        for j in i + 1..t {
            if winners[i * t + j].is_none() {
                let p = probs[i * t + j].ok_or_else(|| {
                    TournamentError::InvalidModel(format!("no result for {i} v {j}"))
                })?;
                winners[i * t + j] = Some(if p >= 0.5 { i } else { j });
            }
        }
    }
    let model = BeatsModel::from_fn(t, |i, j| winners[i * t + j].expect("filled above"))?;
    if with_prob == 0 {
        Ok(model)
    } else {
        model.with_probabilities(|i, j| probs[i * t + j].expect("all pairs present"))
    }
}

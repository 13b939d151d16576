//! Stable marriage: deferred acceptance, stability checks, brute-force
//! enumeration of stable matchings, a voting-based selection among them,
//! and exhaustive search for profitable misreports.

mod popular;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use thiserror::Error;

use crate::profile::validate_ballot;
use crate::seed::Seed;

pub use popular::{
    find_matching_manipulation, popular_stable_procedure, popularity_order, Misreport, Procedure,
};

/// Largest `n` that [`enumerate_stable`] accepts.
pub const MAX_ENUMERATION_SIZE: usize = 8;

/// Largest `n` that [`find_matching_manipulation`] accepts.
pub const MAX_PROBE_SIZE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("n = {n} exceeds the exhaustive-search limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("agent {0} is not part of the instance")]
    UnknownAgent(Agent),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Men,
    Women,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Men => Side::Women,
            Side::Women => Side::Men,
        }
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "men" | "m" => Ok(Side::Men),
            "women" | "w" => Ok(Side::Women),
            _ => Err(format!("unknown side `{s}` (expected men or women)")),
        }
    }
}

/// A person on one side, written `m<i>` or `w<i>` with 0-based `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Agent {
    pub side: Side,
    pub index: usize,
}

impl Agent {
    pub fn man(index: usize) -> Self {
        Agent {
            side: Side::Men,
            index,
        }
    }

    pub fn woman(index: usize) -> Self {
        Agent {
            side: Side::Women,
            index,
        }
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.side == Side::Men { 'm' } else { 'w' };
        write!(f, "{prefix}{}", self.index)
    }
}

impl FromStr for Agent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let side = match s.chars().next() {
            Some('m') => Side::Men,
            Some('w') => Side::Women,
            _ => return Err(format!("agent `{s}` must look like m0 or w2")),
        };
        let index = s[1..]
            .parse()
            .map_err(|_| format!("agent `{s}` must look like m0 or w2"))?;
        Ok(Agent { side, index })
    }
}

/// Complete strict preferences on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatchingInstance {
    men: Vec<Vec<usize>>,
    women: Vec<Vec<usize>>,
    /// `man_rank[m][w]`: position of `w` in `m`'s list.
    man_rank: Vec<Vec<usize>>,
    woman_rank: Vec<Vec<usize>>,
}

fn rank_table(prefs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    prefs
        .iter()
        .map(|list| {
            let mut rank = vec![0; list.len()];
            for (pos, &x) in list.iter().enumerate() {
                rank[x] = pos;
            }
            rank
        })
        .collect()
}

impl MatchingInstance {
    /// `men[m]` ranks women best first; `women[w]` ranks men.
    pub fn new(men: Vec<Vec<usize>>, women: Vec<Vec<usize>>) -> Result<Self, MatchingError> {
        let n = men.len();
        if women.len() != n {
            return Err(MatchingError::InvalidInstance(format!(
                "{n} men but {} women",
                women.len()
            )));
        }
        for (side, lists) in [("m", &men), ("w", &women)] {
            for (i, list) in lists.iter().enumerate() {
                validate_ballot(list, n).map_err(|e| {
                    MatchingError::InvalidInstance(format!("list of {side}{i}: {e}"))
                })?;
            }
        }
        Ok(MatchingInstance {
            man_rank: rank_table(&men),
            woman_rank: rank_table(&women),
            men,
            women,
        })
    }

    /// Independent uniform lists on both sides.
    pub fn random(n: usize, seed: Seed) -> Self {
        let mut rng = seed.rng();
        let mut lists = || -> Vec<Vec<usize>> {
            (0..n)
                .map(|_| {
                    let mut l: Vec<usize> = (0..n).collect();
                    l.shuffle(&mut rng);
                    l
                })
                .collect()
        };
        let men = lists();
        let women = lists();
        Self::new(men, women).expect("shuffles are permutations")
    }

    pub fn n(&self) -> usize {
        self.men.len()
    }

    /// Preference list of one agent.
    pub fn prefs(&self, agent: Agent) -> &[usize] {
        match agent.side {
            Side::Men => &self.men[agent.index],
            Side::Women => &self.women[agent.index],
        }
    }

    pub fn lists(&self, side: Side) -> &[Vec<usize>] {
        match side {
            Side::Men => &self.men,
            Side::Women => &self.women,
        }
    }

    /// Position of `partner` in `agent`'s list; 0 is best.
    pub fn rank(&self, agent: Agent, partner: usize) -> usize {
        match agent.side {
            Side::Men => self.man_rank[agent.index][partner],
            Side::Women => self.woman_rank[agent.index][partner],
        }
    }

    /// Same instance with one agent's list replaced.
    pub fn with_prefs(&self, agent: Agent, list: Vec<usize>) -> Result<Self, MatchingError> {
        let (mut men, mut women) = (self.men.clone(), self.women.clone());
        let slot = match agent.side {
            Side::Men => men.get_mut(agent.index),
            Side::Women => women.get_mut(agent.index),
        };
        *slot.ok_or(MatchingError::UnknownAgent(agent))? = list;
        Self::new(men, women)
    }

    /// Men become women and vice versa.
    pub fn swap_sides(&self) -> Self {
        Self::new(self.women.clone(), self.men.clone()).expect("already valid")
    }

    pub fn check_agent(&self, agent: Agent) -> Result<(), MatchingError> {
        if agent.index < self.n() {
            Ok(())
        } else {
            Err(MatchingError::UnknownAgent(agent))
        }
    }
}

/// A perfect matching, stored as each man's wife.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    wife: Vec<usize>,
}

impl Matching {
    /// `wife[m]` is the woman matched to man `m`; must be a permutation.
    pub fn new(wife: Vec<usize>) -> Result<Self, MatchingError> {
        validate_ballot(&wife, wife.len())
            .map_err(|e| MatchingError::InvalidInstance(e.to_string()))?;
        Ok(Matching { wife })
    }

    pub fn n(&self) -> usize {
        self.wife.len()
    }

    pub fn wife(&self, man: usize) -> usize {
        self.wife[man]
    }

    pub fn husband(&self, woman: usize) -> usize {
        self.wife
            .iter()
            .position(|&w| w == woman)
            .expect("perfect matching")
    }

    pub fn wives(&self) -> &[usize] {
        &self.wife
    }

    /// Partner of `agent`.
    pub fn partner(&self, agent: Agent) -> usize {
        match agent.side {
            Side::Men => self.wife(agent.index),
            Side::Women => self.husband(agent.index),
        }
    }

    /// The same pairs read in the instance with sides swapped.
    pub fn mirror(&self) -> Matching {
        let mut husband = vec![0; self.n()];
        for (m, &w) in self.wife.iter().enumerate() {
            husband[w] = m;
        }
        Matching { wife: husband }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, w) in self.wife.iter().enumerate() {
            if m > 0 {
                f.write_str(" ")?;
            }
            write!(f, "m{m}-w{w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    BlockingPair { man: usize, woman: usize },
}

/// Deferred acceptance with the given side proposing. Returns the stable
/// matching that is best for every member of the proposing side.
pub fn gale_shapley(instance: &MatchingInstance, proposing: Side) -> Matching {
    if proposing == Side::Women {
        return gale_shapley(&instance.swap_sides(), Side::Men).mirror();
    }
    let n = instance.n();
    let mut next = vec![0usize; n];
    let mut husband: Vec<Option<usize>> = vec![None; n];
    let mut free: Vec<usize> = (0..n).rev().collect();
    while let Some(m) = free.pop() {
        let w = instance.men[m][next[m]];
        next[m] += 1;
        match husband[w] {
            None => husband[w] = Some(m),
            Some(h) if instance.woman_rank[w][m] < instance.woman_rank[w][h] => {
                husband[w] = Some(m);
                free.push(h);
            }
            Some(_) => free.push(m),
        }
    }
    let mut wife = vec![0; n];
    for (w, h) in husband.into_iter().enumerate() {
        wife[h.expect("complete lists match everyone")] = w;
    }
    Matching { wife }
}

/// Stable, or the lexicographically least `(man, woman)` blocking pair.
pub fn is_stable(instance: &MatchingInstance, matching: &Matching) -> Stability {
    let n = instance.n();
    let mut husband = vec![0; n];
    for (m, &w) in matching.wife.iter().enumerate() {
        husband[w] = m;
    }
    for m in 0..n {
        let current = instance.man_rank[m][matching.wife[m]];
        for (w, &h) in husband.iter().enumerate() {
            if instance.man_rank[m][w] < current
                && instance.woman_rank[w][m] < instance.woman_rank[w][h]
            {
                return Stability::BlockingPair { man: m, woman: w };
            }
        }
    }
    Stability::Stable
}

/// Every stable matching, in lexicographic order of the wives vector.
pub fn enumerate_stable(instance: &MatchingInstance) -> Result<Vec<Matching>, MatchingError> {
    let n = instance.n();
    if n > MAX_ENUMERATION_SIZE {
        return Err(MatchingError::TooLarge {
            n,
            limit: MAX_ENUMERATION_SIZE,
        });
    }
    Ok((0..n)
        .permutations(n)
        .map(|wife| Matching { wife })
        .filter(|m| is_stable(instance, m) == Stability::Stable)
        .collect())
}

/// Reads an instance: `n`, then `n` lines of men's lists over women, then
/// `n` lines of women's lists over men. Entries are indices, optionally
/// written `w3`/`m3`, separated by spaces or `>`. `#` starts a comment.
pub fn parse_instance(text: &str) -> Result<MatchingInstance, MatchingError> {
    let err = |line: usize, message: String| MatchingError::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, first) = lines.next().ok_or_else(|| err(1, "missing n".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| err(line, format!("expected n, got `{first}`")))?;
    let mut read_side = |prefix: char| -> Result<Vec<Vec<usize>>, MatchingError> {
        (0..n)
            .map(|_| {
                let (line, text) = lines.next().ok_or_else(|| {
                    MatchingError::InvalidInstance(format!("expected {n} lists per side"))
                })?;
                text.split(|c: char| c.is_whitespace() || c == '>')
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.strip_prefix(prefix)
                            .unwrap_or(t)
                            .parse::<usize>()
                            .map_err(|_| err(line, format!("bad entry `{t}`")))
                    })
                    .collect()
            })
            .collect()
    };
    let men = read_side('w')?;
    let women = read_side('m')?;
    if let Some((line, extra)) = lines.next() {
        return Err(err(line, format!("unexpected trailing line `{extra}`")));
    }
    MatchingInstance::new(men, women)
}

//! Single-peaked and single-troughed preferences along an axis.
//!
//! Sampling picks a uniform peak and then repeatedly extends the ranked
//! interval by one step left or right, choosing uniformly between the two
//! frontiers while both exist. Its support is exactly the single-peaked
//! orders, but the distribution over that support is not uniform: orders
//! with peaks near the ends of the axis are more likely.

use rand::Rng;

use super::{push_unit, GenError};
use crate::profile::{validate_ballot, Candidate, Profile};
use crate::seed::{Seed, SimRng};

/// Left-to-right ordering of the candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    order: Vec<Candidate>,
    position: Vec<usize>,
}

impl Axis {
    pub fn new(order: Vec<Candidate>) -> Result<Self, GenError> {
        validate_ballot(&order, order.len()).map_err(GenError::InvalidAxis)?;
        let mut position = vec![0; order.len()];
        for (i, &c) in order.iter().enumerate() {
            position[c] = i;
        }
        Ok(Axis { order, position })
    }

    /// `0 < 1 < ... < m-1`.
    pub fn identity(m: usize) -> Self {
        Axis {
            order: (0..m).collect(),
            position: (0..m).collect(),
        }
    }

    pub fn order(&self) -> &[Candidate] {
        &self.order
    }

    pub fn m(&self) -> usize {
        self.order.len()
    }

    pub fn position(&self, c: Candidate) -> usize {
        self.position[c]
    }
}

/// True when every prefix of `ranking` occupies a contiguous interval of the
/// axis. Runs in O(m).
pub fn is_single_peaked(ranking: &[Candidate], axis: &Axis) -> bool {
    if ranking.len() != axis.m() || validate_ballot(ranking, axis.m()).is_err() {
        return false;
    }
    let Some(&peak) = ranking.first() else {
        return true;
    };
    let (mut lo, mut hi) = (axis.position(peak), axis.position(peak));
    for &c in &ranking[1..] {
        let p = axis.position(c);
        if lo > 0 && p == lo - 1 {
            lo = p;
        } else if p == hi + 1 {
            hi = p;
        } else {
            return false;
        }
    }
    true
}

fn sample_peaked(axis: &Axis, rng: &mut SimRng) -> Vec<Candidate> {
    let m = axis.m();
    if m == 0 {
        return Vec::new();
    }
    let peak = rng.random_range(0..m as u64) as usize;
    let mut ranking = Vec::with_capacity(m);
    ranking.push(axis.order()[peak]);
    // Next unranked axis positions on each side.
    let mut left = peak.checked_sub(1);
    let mut right = (peak + 1 < m).then_some(peak + 1);
    loop {
        let take_left = match (left, right) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(_), Some(_)) => rng.random_bool(0.5),
        };
        if take_left {
            let l = left.expect("left frontier");
            ranking.push(axis.order()[l]);
            left = l.checked_sub(1);
        } else {
            let r = right.expect("right frontier");
            ranking.push(axis.order()[r]);
            right = (r + 1 < m).then_some(r + 1);
        }
    }
    ranking
}

pub fn single_peaked_on(axis: &Axis, n: usize, seed: Seed) -> Profile {
    let mut rng = seed.rng();
    let mut profile = Profile::new(axis.m());
    for _ in 0..n {
        push_unit(&mut profile, sample_peaked(axis, &mut rng));
    }
    profile
}

/// Single-peaked ballots on the identity axis.
pub fn single_peaked(m: usize, n: usize, seed: Seed) -> Profile {
    single_peaked_on(&Axis::identity(m), n, seed)
}

/// Ballots whose reversal is single-peaked: the least preferred candidate is
/// the trough and preference rises towards both ends of the axis.
pub fn single_troughed_on(axis: &Axis, n: usize, seed: Seed) -> Profile {
    let mut rng = seed.rng();
    let mut profile = Profile::new(axis.m());
    for _ in 0..n {
        let mut ranking = sample_peaked(axis, &mut rng);
        ranking.reverse();
        push_unit(&mut profile, ranking);
    }
    profile
}

pub fn single_troughed(m: usize, n: usize, seed: Seed) -> Profile {
    single_troughed_on(&Axis::identity(m), n, seed)
}

//! Random profile ensembles and profile file I/O.
//!
//! Every generator takes an explicit [`Seed`] and emits exactly `n` entries
//! of weight one. Identical arguments give identical profiles.

mod io;
mod peaked;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::profile::{Ballot, Candidate, Profile};
use crate::seed::{Seed, SimRng};

pub use io::{
    read_any_profile, read_profile, read_veto_profile, write_profile, write_veto_profile,
    AnyProfile, FormatError,
};
pub use peaked::{
    is_single_peaked, single_peaked, single_peaked_on, single_troughed, single_troughed_on, Axis,
};

/// Largest `m` whose `m!` fits the urn's 64-bit type counter.
pub const MAX_URN_CANDIDATES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error(
        "urn over {m} candidates overflows the ballot-type counter (m <= {MAX_URN_CANDIDATES})"
    )]
    Overflow { m: usize },
    #[error("invalid axis: {0}")]
    InvalidAxis(crate::profile::BallotError),
    #[error("cannot resample an empty set of voting records")]
    EmptyRecords,
}

/// Replacement count of the Pólya-Eggenberger urn.
///
/// `a = 0` is impartial culture, `a = 1` impartial anonymous culture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct UrnParams {
    pub a: u64,
}

/// Uniformly random permutation of `0..m`.
pub(crate) fn random_ranking(m: usize, rng: &mut SimRng) -> Vec<Candidate> {
    let mut ranking: Vec<Candidate> = (0..m).collect();
    ranking.shuffle(rng);
    ranking
}

/// `n` independent uniform ballots.
pub fn impartial_culture(m: usize, n: usize, seed: Seed) -> Profile {
    let mut rng = seed.rng();
    let mut profile = Profile::new(m);
    for _ in 0..n {
        push_unit(&mut profile, random_ranking(m, &mut rng));
    }
    profile
}

/// Sequential draws from a Pólya-Eggenberger urn.
///
/// The urn starts with one copy of each of the `m!` ballot types and every
/// draw returns `a` extra copies of the drawn type. Only drawn types carry
/// extra mass, so before draw `i` (0-based) the urn holds `m!` original
/// copies, spread uniformly over all types, plus `a` copies of each earlier
/// draw. A draw therefore picks a fresh uniform ballot with probability
/// `m! / (m! + a·i)` and otherwise repeats a uniformly chosen earlier draw.
pub fn urn(m: usize, n: usize, params: UrnParams, seed: Seed) -> Result<Profile, GenError> {
    if m > MAX_URN_CANDIDATES {
        return Err(GenError::Overflow { m });
    }
    let types: u128 = (1..=m as u128).product();
    let a = params.a as u128;
    let mut rng = seed.rng();
    let mut drawn: Vec<Vec<Candidate>> = Vec::with_capacity(n);
    for i in 0..n {
        let extra = a.checked_mul(i as u128).ok_or(GenError::Overflow { m })?;
        let mass = types.checked_add(extra).ok_or(GenError::Overflow { m })?;
        let ranking = if extra == 0 || rng.random_range(0..mass) < types {
            random_ranking(m, &mut rng)
        } else {
            let j = rng.random_range(0..i as u64) as usize;
            drawn[j].clone()
        };
        drawn.push(ranking);
    }
    let mut profile = Profile::new(m);
    for ranking in drawn {
        push_unit(&mut profile, ranking);
    }
    Ok(profile)
}

/// Resamples `n` ballots with replacement from a record profile, in
/// proportion to entry weight.
pub fn resample(records: &Profile, n: usize, seed: Seed) -> Result<Profile, GenError> {
    let total = records.total_weight();
    if total == 0 {
        return Err(GenError::EmptyRecords);
    }
    let mut rng = seed.rng();
    let mut profile = Profile::new(records.m());
    for _ in 0..n {
        let mut r = rng.random_range(0..total);
        let ballot = records
            .entries()
            .iter()
            .find(|(_, w)| {
                if r < *w {
                    true
                } else {
                    r -= w;
                    false
                }
            })
            .map(|(b, _)| b.clone())
            .expect("r < total weight");
        profile.push(ballot, 1).expect("record ballots are valid");
    }
    Ok(profile)
}

fn push_unit(profile: &mut Profile, ranking: Vec<Candidate>) {
    profile
        .push(Ballot::from_permutation(ranking), 1)
        .expect("generated ballots are permutations");
}

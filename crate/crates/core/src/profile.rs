//! Ballots and weighted profiles.
//!
//! Candidates are dense indices in `[0, m)`. A [`Profile`] is a weighted
//! multiset of complete strict rankings; a [`VetoProfile`] is the same idea
//! for single-candidate vetoes. Entry order never matters to any consumer.

use std::fmt;

use thiserror::Error;

/// Candidate index in `[0, m)`.
pub type Candidate = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallotError {
    #[error("candidate {0} appears more than once")]
    DuplicateCandidate(Candidate),
    #[error("candidate {0} is missing from the ranking")]
    MissingCandidate(Candidate),
    #[error("candidate {0} is out of range")]
    OutOfRange(Candidate),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error(transparent)]
    Ballot(#[from] BallotError),
    #[error("entry weights must be positive")]
    ZeroWeight,
    #[error("total weight overflows")]
    WeightOverflow,
}

/// Checks that `ranking` is a permutation of `0..m`.
///
/// Out-of-range and duplicate entries are reported in ranking order, before
/// any missing candidate.
pub fn validate_ballot(ranking: &[Candidate], m: usize) -> Result<(), BallotError> {
    let mut seen = vec![false; m];
    for &c in ranking {
        if c >= m {
            return Err(BallotError::OutOfRange(c));
        }
        if seen[c] {
            return Err(BallotError::DuplicateCandidate(c));
        }
        seen[c] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(missing) => Err(BallotError::MissingCandidate(missing)),
        None => Ok(()),
    }
}

/// A complete strict ranking, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ballot(Vec<Candidate>);

impl Ballot {
    pub fn new(ranking: Vec<Candidate>, m: usize) -> Result<Self, BallotError> {
        validate_ballot(&ranking, m)?;
        Ok(Ballot(ranking))
    }

    /// `0 > 1 > ... > m-1`.
    pub fn identity(m: usize) -> Self {
        Ballot((0..m).collect())
    }

    pub(crate) fn from_permutation(ranking: Vec<Candidate>) -> Self {
        debug_assert!(validate_ballot(&ranking, ranking.len()).is_ok());
        Ballot(ranking)
    }

    pub fn ranking(&self) -> &[Candidate] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Option<Candidate> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Candidate> {
        self.0.last().copied()
    }

    pub fn reversed(&self) -> Ballot {
        Ballot(self.0.iter().rev().copied().collect())
    }

    pub fn into_inner(self) -> Vec<Candidate> {
        self.0
    }
}

impl fmt::Display for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(">")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A single veto against one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VetoBallot {
    pub vetoed: Candidate,
}

impl VetoBallot {
    pub fn new(vetoed: Candidate, m: usize) -> Result<Self, BallotError> {
        if vetoed >= m {
            return Err(BallotError::OutOfRange(vetoed));
        }
        Ok(VetoBallot { vetoed })
    }
}

impl fmt::Display for VetoBallot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "veto {}", self.vetoed)
    }
}

/// Weighted multiset of ranked ballots over `m` candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    m: usize,
    entries: Vec<(Ballot, u64)>,
}

impl Profile {
    pub fn new(m: usize) -> Self {
        Profile {
            m,
            entries: Vec::new(),
        }
    }

    /// Builds a profile of unit-weight ballots.
    pub fn from_rankings<I>(m: usize, rankings: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = Vec<Candidate>>,
    {
        let mut profile = Profile::new(m);
        for ranking in rankings {
            profile.push(Ballot::new(ranking, m)?, 1)?;
        }
        Ok(profile)
    }

    pub fn from_weighted<I>(m: usize, entries: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = (Vec<Candidate>, u64)>,
    {
        let mut profile = Profile::new(m);
        for (ranking, weight) in entries {
            profile.push(Ballot::new(ranking, m)?, weight)?;
        }
        Ok(profile)
    }

    pub fn push(&mut self, ballot: Ballot, weight: u64) -> Result<(), ProfileError> {
        validate_ballot(ballot.ranking(), self.m)?;
        if weight == 0 {
            return Err(ProfileError::ZeroWeight);
        }
        self.total_weight()
            .checked_add(weight)
            .ok_or(ProfileError::WeightOverflow)?;
        self.entries.push((ballot, weight));
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[(Ballot, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total weight `n`.
    pub fn total_weight(&self) -> u64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// Copy of this profile with extra weighted ballots appended.
    pub fn with_ballots<'a, I>(&self, extra: I) -> Result<Profile, ProfileError>
    where
        I: IntoIterator<Item = (&'a Ballot, u64)>,
    {
        let mut out = self.clone();
        for (ballot, weight) in extra {
            out.push(ballot.clone(), weight)?;
        }
        Ok(out)
    }

    /// Sincere vetoes: every voter vetoes their least preferred candidate.
    pub fn sincere_vetoes(&self) -> VetoProfile {
        VetoProfile {
            m: self.m,
            entries: self
                .entries
                .iter()
                .filter_map(|(b, w)| b.last().map(|c| (VetoBallot { vetoed: c }, *w)))
                .collect(),
        }
    }
}

/// Weighted multiset of vetoes over `m` candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VetoProfile {
    m: usize,
    entries: Vec<(VetoBallot, u64)>,
}

impl VetoProfile {
    pub fn new(m: usize) -> Self {
        VetoProfile {
            m,
            entries: Vec::new(),
        }
    }

    pub fn from_weighted<I>(m: usize, entries: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = (Candidate, u64)>,
    {
        let mut profile = VetoProfile::new(m);
        for (vetoed, weight) in entries {
            profile.push(VetoBallot::new(vetoed, m)?, weight)?;
        }
        Ok(profile)
    }

    /// One unit-weight veto per listed candidate.
    pub fn from_vetoes<I>(m: usize, vetoes: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = Candidate>,
    {
        Self::from_weighted(m, vetoes.into_iter().map(|c| (c, 1)))
    }

    pub fn push(&mut self, ballot: VetoBallot, weight: u64) -> Result<(), ProfileError> {
        if ballot.vetoed >= self.m {
            return Err(BallotError::OutOfRange(ballot.vetoed).into());
        }
        if weight == 0 {
            return Err(ProfileError::ZeroWeight);
        }
        self.total_weight()
            .checked_add(weight)
            .ok_or(ProfileError::WeightOverflow)?;
        self.entries.push((ballot, weight));
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[(VetoBallot, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// Weighted veto count per candidate.
    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.m];
        for (b, w) in &self.entries {
            counts[b.vetoed] += w;
        }
        counts
    }

    pub fn with_ballots<'a, I>(&self, extra: I) -> Result<VetoProfile, ProfileError>
    where
        I: IntoIterator<Item = (&'a VetoBallot, u64)>,
    {
        let mut out = self.clone();
        for (ballot, weight) in extra {
            out.push(*ballot, weight)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert_eq!(validate_ballot(&[0, 1, 2], 3), Ok(()));
        assert_eq!(
            validate_ballot(&[0, 0, 2], 3),
            Err(BallotError::DuplicateCandidate(0))
        );
        assert_eq!(
            validate_ballot(&[0, 1], 3),
            Err(BallotError::MissingCandidate(2))
        );
        assert_eq!(
            validate_ballot(&[0, 3, 1], 3),
            Err(BallotError::OutOfRange(3))
        );
        assert_eq!(validate_ballot(&[], 0), Ok(()));
    }

    #[test]
    fn push_rejects_zero_weight_and_bad_ballots() {
        let mut p = Profile::new(2);
        assert_eq!(
            p.push(Ballot::identity(2), 0),
            Err(ProfileError::ZeroWeight)
        );
        assert_eq!(
            p.push(Ballot::identity(3), 1),
            Err(ProfileError::Ballot(BallotError::OutOfRange(2)))
        );
        p.push(Ballot::identity(2), 3).unwrap();
        assert_eq!(p.total_weight(), 3);
    }

    #[test]
    fn sincere_vetoes_take_last_place() {
        let p = Profile::from_weighted(3, [(vec![0, 1, 2], 2), (vec![2, 0, 1], 1)]).unwrap();
        let v = p.sincere_vetoes();
        assert_eq!(v.counts(), vec![0, 1, 2]);
    }

    #[test]
    fn display_uses_gt_separator() {
        assert_eq!(Ballot::new(vec![2, 0, 1], 3).unwrap().to_string(), "2>0>1");
    }
}

//! Deterministic tie resolution.
//!
//! Every policy is a total priority order over candidates; [`break_tie`]
//! selects the highest-priority member of a tied set. What "selected" means
//! is up to the caller: STV eliminates the selected candidate, the veto rule
//! elects it.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::profile::{validate_ballot, BallotError, Candidate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TieBreakError {
    #[error("cannot break a tie over an empty set")]
    EmptySet,
    #[error("candidate {0} does not appear in the fixed tie-break order")]
    NotInOrder(Candidate),
    #[error("invalid tie-break order: {0}")]
    InvalidOrder(BallotError),
    #[error("unrecognised tie-break policy `{0}` (expected lexmin, lexmax or order:<perm>)")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum TieBreakPolicy {
    /// Smallest index is selected.
    #[default]
    LexMin,
    /// Largest index is selected.
    LexMax,
    /// Earliest candidate in the sequence is selected.
    FixedOrder(Vec<Candidate>),
}

impl TieBreakPolicy {
    /// Checks a fixed order is a permutation of `0..m`.
    pub fn validate(&self, m: usize) -> Result<(), TieBreakError> {
        match self {
            TieBreakPolicy::FixedOrder(order) => {
                validate_ballot(order, m).map_err(TieBreakError::InvalidOrder)
            }
            _ => Ok(()),
        }
    }

    /// Priority rank of `c`; lower ranks are selected first.
    pub fn rank(&self, c: Candidate) -> Result<usize, TieBreakError> {
        match self {
            TieBreakPolicy::LexMin => Ok(c),
            TieBreakPolicy::LexMax => Ok(usize::MAX - c),
            TieBreakPolicy::FixedOrder(order) => order
                .iter()
                .position(|&o| o == c)
                .ok_or(TieBreakError::NotInOrder(c)),
        }
    }

    /// Rank table for candidates `0..m`, for hot loops.
    pub fn ranks(&self, m: usize) -> Result<Vec<usize>, TieBreakError> {
        self.validate(m)?;
        match self {
            TieBreakPolicy::FixedOrder(order) => {
                let mut ranks = vec![0; m];
                for (i, &c) in order.iter().enumerate() {
                    ranks[c] = i;
                }
                Ok(ranks)
            }
            _ => (0..m).map(|c| self.rank(c)).collect(),
        }
    }

    /// True when `a` would be selected over `b`.
    pub fn prefers(&self, a: Candidate, b: Candidate) -> Result<bool, TieBreakError> {
        Ok(self.rank(a)? < self.rank(b)?)
    }

    /// The policy seen through a relabelling that keeps only `kept`
    /// (in increasing order) and renumbers them `0..kept.len()`.
    pub fn restrict(&self, kept: &[Candidate]) -> TieBreakPolicy {
        match self {
            TieBreakPolicy::FixedOrder(order) => TieBreakPolicy::FixedOrder(
                order
                    .iter()
                    .filter_map(|c| kept.iter().position(|k| k == c))
                    .collect(),
            ),
            other => other.clone(),
        }
    }
}

/// Returns the member of `tied` selected by `policy`.
pub fn break_tie(tied: &[Candidate], policy: &TieBreakPolicy) -> Result<Candidate, TieBreakError> {
    let mut best: Option<(usize, Candidate)> = None;
    for &c in tied {
        let r = policy.rank(c)?;
        if best.is_none_or(|(br, _)| r < br) {
            best = Some((r, c));
        }
    }
    best.map(|(_, c)| c).ok_or(TieBreakError::EmptySet)
}

impl fmt::Display for TieBreakPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreakPolicy::LexMin => f.write_str("lexmin"),
            TieBreakPolicy::LexMax => f.write_str("lexmax"),
            TieBreakPolicy::FixedOrder(order) => {
                f.write_str("order:")?;
                for (i, c) in order.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for TieBreakPolicy {
    type Err = TieBreakError;

    /// `lexmin`, `lexmax`, or `order:3,2,1,0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "lexmin" => Ok(TieBreakPolicy::LexMin),
            "lexmax" => Ok(TieBreakPolicy::LexMax),
            other => {
                let list = other
                    .strip_prefix("order:")
                    .ok_or_else(|| TieBreakError::Parse(s.to_string()))?;
                list.split(',')
                    .map(|t| t.trim().parse::<Candidate>())
                    .collect::<Result<Vec<_>, _>>()
                    .map(TieBreakPolicy::FixedOrder)
                    .map_err(|_| TieBreakError::Parse(s.to_string()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(break_tie(&[2], &TieBreakPolicy::LexMin), Ok(2));
        assert_eq!(break_tie(&[1, 3], &TieBreakPolicy::LexMin), Ok(1));
        assert_eq!(break_tie(&[1, 3], &TieBreakPolicy::LexMax), Ok(3));
        assert_eq!(
            break_tie(&[1, 3], &TieBreakPolicy::FixedOrder(vec![3, 2, 1, 0])),
            Ok(3)
        );
        assert_eq!(
            break_tie(&[], &TieBreakPolicy::LexMin),
            Err(TieBreakError::EmptySet)
        );
        assert_eq!(
            break_tie(&[4], &TieBreakPolicy::FixedOrder(vec![1, 0])),
            Err(TieBreakError::NotInOrder(4))
        );
    }

    #[test]
    fn parse_round_trip() {
        for p in [
            TieBreakPolicy::LexMin,
            TieBreakPolicy::LexMax,
            TieBreakPolicy::FixedOrder(vec![2, 0, 1]),
        ] {
            assert_eq!(p.to_string().parse::<TieBreakPolicy>().unwrap(), p);
        }
        assert!("random".parse::<TieBreakPolicy>().is_err());
        assert!("order:1,x".parse::<TieBreakPolicy>().is_err());
    }

    #[test]
    fn restrict_relabels_fixed_order() {
        let p = TieBreakPolicy::FixedOrder(vec![3, 1, 0, 2]);
        assert_eq!(
            p.restrict(&[0, 2, 3]),
            TieBreakPolicy::FixedOrder(vec![2, 0, 1])
        );
    }

    #[test]
    fn fixed_order_must_be_permutation() {
        assert!(TieBreakPolicy::FixedOrder(vec![0, 0]).validate(2).is_err());
        assert!(TieBreakPolicy::FixedOrder(vec![1, 0]).validate(2).is_ok());
    }

    fn policy_strategy() -> impl Strategy<Value = TieBreakPolicy> {
        prop_oneof![
            Just(TieBreakPolicy::LexMin),
            Just(TieBreakPolicy::LexMax),
            Just((0..8usize).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(TieBreakPolicy::FixedOrder),
        ]
    }

    proptest! {
        #[test]
        fn break_tie_is_total_deterministic_and_closed(
            tied in proptest::collection::btree_set(0..8usize, 1..8),
            policy in policy_strategy(),
        ) {
            let tied: Vec<_> = tied.into_iter().collect();
            let a = break_tie(&tied, &policy).unwrap();
            let mut rev = tied.clone();
            rev.reverse();
            prop_assert!(tied.contains(&a));
            prop_assert_eq!(a, break_tie(&rev, &policy).unwrap());
        }
    }
}

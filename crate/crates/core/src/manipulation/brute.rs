//! Exhaustive manipulation oracle.

use std::time::Instant;

use super::{
    check_query, Goal, ManipulationError, ManipulationOutcome, ManipulationQuery, SearchStats,
    Verdict, VotingRule,
};

/// Largest candidate count the oracle accepts.
pub const MAX_BRUTE_FORCE_CANDIDATES: usize = 6;

/// Largest number of coalition ballot assignments the oracle will enumerate.
/// Admits six-candidate STV with three free ballots (720³).
pub const BRUTE_FORCE_LIMIT: u128 = 400_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoalitionBallots {
    /// All members cast the same ballot.
    Identical,
    /// Each member picks independently.
    Distinct,
}

/// Enumerates coalition ballots and evaluates the rule on each assignment.
///
/// Enumeration is lexicographic over [`VotingRule::ballot_space`] with the
/// first member varying slowest; the first success is returned. `nodes`
/// counts evaluated assignments.
pub fn brute_force_manipulate<R: VotingRule>(
    query: &ManipulationQuery<R::Profile>,
    mode: CoalitionBallots,
) -> Result<ManipulationOutcome<R::Ballot>, ManipulationError> {
    let start = Instant::now();
    let m = R::candidates(&query.fixed);
    check_query(query, m)?;
    if m > MAX_BRUTE_FORCE_CANDIDATES {
        return Err(ManipulationError::TooLarge(format!(
            "{m} candidates (limit {MAX_BRUTE_FORCE_CANDIDATES})"
        )));
    }
    let space = R::ballot_space(m);
    let k = query.coalition.len();
    let free = match mode {
        CoalitionBallots::Identical => 1,
        CoalitionBallots::Distinct => k,
    };
    let assignments = (space.len() as u128)
        .checked_pow(free as u32)
        .filter(|&a| a <= BRUTE_FORCE_LIMIT)
        .ok_or_else(|| {
            ManipulationError::TooLarge(format!(
                "{} ballots ^ {free} members exceeds {BRUTE_FORCE_LIMIT} assignments",
                space.len()
            ))
        })?;

    let mut index = vec![0usize; free];
    let mut extra: Vec<(R::Ballot, u64)> = query
        .coalition
        .iter()
        .map(|&w| (space[0].clone(), w))
        .collect();
    let mut nodes = 0u64;
    for _ in 0..assignments {
        for (member, slot) in extra.iter_mut().enumerate() {
            let i = if free == 1 { index[0] } else { index[member] };
            slot.0 = space[i].clone();
        }
        nodes += 1;
        let profile = R::with_ballots(&query.fixed, &extra)?;
        let winner = R::winner(&profile, &query.policy)?;
        let success = match query.goal {
            Goal::Constructive => winner == query.target,
            Goal::Destructive => winner != query.target,
        };
        if success {
            return Ok(ManipulationOutcome {
                result: Verdict::Found(extra.into_iter().map(|(b, _)| b).collect()),
                stats: SearchStats {
                    nodes,
                    decided: true,
                    elapsed: start.elapsed(),
                },
            });
        }
        // Odometer, last member fastest.
        for digit in index.iter_mut().rev() {
            *digit += 1;
            if *digit < space.len() {
                break;
            }
            *digit = 0;
        }
    }
    Ok(ManipulationOutcome {
        result: Verdict::Impossible,
        stats: SearchStats {
            nodes,
            decided: true,
            elapsed: start.elapsed(),
        },
    })
}

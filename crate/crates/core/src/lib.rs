//! Manipulation laboratory for elections, tournaments and stable marriage.
//!
//! The crate bundles exact solvers that decide whether strategic agents can
//! change an outcome, random preference ensembles to feed them, and an
//! experiment harness that measures how often manipulation succeeds and how
//! much search it costs as instances grow.
//!
//! * [`profile`], [`tiebreak`], [`seed`]: shared data model.
//! * [`rules`]: STV and veto.
//! * [`generators`]: impartial culture, urn, single-peaked/troughed, file I/O.
//! * [`manipulation`]: STV and weighted veto manipulation with brute-force oracles.
//! * [`experiments`]: sweeps over `m` or `n`, CSV and plot output.
//! * [`tournaments`]: cup and round-robin fixing by thrown games.
//! * [`matching`]: stable marriage procedures and misreport probes.

pub mod profile;
pub mod rules;
pub mod seed;
pub mod tiebreak;

pub mod experiments;
pub mod generators;
pub mod manipulation;
pub mod matching;
pub mod tournaments;

pub use profile::{
    validate_ballot, Ballot, BallotError, Candidate, Profile, ProfileError, VetoBallot, VetoProfile,
};
pub use rules::{stv_outcome, veto_outcome, RuleError, RuleKind, StvTrace, VetoTally};
pub use seed::{Seed, SimRng};
pub use tiebreak::{break_tie, TieBreakError, TieBreakPolicy};

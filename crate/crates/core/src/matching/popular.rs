//! Selecting a stable matching by the preferences of popular people, and
//! probing procedures for profitable misreports.
//!
//! The popular procedure ranks each side by repeatedly electing the most
//! popular remaining person with a voting rule, where the other side's lists
//! are the ballots. It then walks the two rankings interleaved, starting
//! with a chosen side, and at each person keeps only the stable matchings
//! that give that person their best partner among those still left.

use itertools::Itertools;

use super::{
    enumerate_stable, gale_shapley, Agent, Matching, MatchingError, MatchingInstance, Side,
    MAX_PROBE_SIZE,
};
use crate::profile::{Profile, VetoProfile};
use crate::rules::{stv_winner, veto_winner, RuleKind};
use crate::tiebreak::TieBreakPolicy;

/// A stable marriage procedure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Procedure {
    /// Deferred acceptance with this side proposing.
    GaleShapley(Side),
    /// [`popular_stable_procedure`].
    Popular {
        rule: RuleKind,
        policy: TieBreakPolicy,
        first: Side,
    },
}

impl Procedure {
    /// Popular procedure with LexMin ties, women first.
    pub fn popular(rule: RuleKind) -> Self {
        Procedure::Popular {
            rule,
            policy: TieBreakPolicy::LexMin,
            first: Side::Women,
        }
    }

    pub fn run(&self, instance: &MatchingInstance) -> Result<Matching, MatchingError> {
        match self {
            Procedure::GaleShapley(side) => Ok(gale_shapley(instance, *side)),
            Procedure::Popular {
                rule,
                policy,
                first,
            } => popular_stable_procedure(instance, *rule, policy, *first),
        }
    }
}

fn rule_error(e: impl std::fmt::Display) -> MatchingError {
    MatchingError::InvalidInstance(e.to_string())
}

/// People of side `ranked`, most popular first. Each round elects one of the
/// remaining people with `rule`, using the other side's lists restricted to
/// the remaining people as ballots.
pub fn popularity_order(
    instance: &MatchingInstance,
    ranked: Side,
    rule: RuleKind,
    policy: &TieBreakPolicy,
) -> Result<Vec<usize>, MatchingError> {
    let n = instance.n();
    policy.validate(n).map_err(rule_error)?;
    let voters = instance.lists(ranked.other());
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let local = policy.restrict(&remaining);
        let ballots: Vec<Vec<usize>> = voters
            .iter()
            .map(|list| {
                list.iter()
                    .filter_map(|x| remaining.iter().position(|r| r == x))
                    .collect()
            })
            .collect();
        let k = remaining.len();
        let winner = match rule {
            RuleKind::Stv => {
                let profile = Profile::from_rankings(k, ballots).map_err(rule_error)?;
                stv_winner(&profile, &local).map_err(rule_error)?
            }
            RuleKind::Veto => {
                let profile = VetoProfile::from_vetoes(k, ballots.iter().map(|b| b[k - 1]))
                    .map_err(rule_error)?;
                veto_winner(&profile, &local).map_err(rule_error)?
            }
        };
        order.push(remaining.remove(winner));
    }
    Ok(order)
}

/// The stable matching chosen by popular people's preferences.
///
/// Both sides are ranked with [`popularity_order`], the rankings are
/// interleaved starting with `first`, and the stable set is filtered person
/// by person down to the matching each prefers most among those left. After
/// all `2n` people one matching remains.
pub fn popular_stable_procedure(
    instance: &MatchingInstance,
    rule: RuleKind,
    policy: &TieBreakPolicy,
    first: Side,
) -> Result<Matching, MatchingError> {
    let mut survivors = enumerate_stable(instance)?;
    let lead = popularity_order(instance, first, rule, policy)?;
    let follow = popularity_order(instance, first.other(), rule, policy)?;
    let people = lead.iter().zip(&follow).flat_map(|(&a, &b)| {
        [
            Agent {
                side: first,
                index: a,
            },
            Agent {
                side: first.other(),
                index: b,
            },
        ]
    });
    for person in people {
        let best = survivors
            .iter()
            .map(|m| instance.rank(person, m.partner(person)))
            .min()
            .expect("a stable matching always exists");
        survivors.retain(|m| instance.rank(person, m.partner(person)) == best);
    }
    debug_assert!(survivors.len() == 1);
    Ok(survivors.swap_remove(0))
}

/// A preference list that gets an agent a partner they truly prefer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Misreport {
    pub list: Vec<usize>,
    /// Partner obtained with the misreport.
    pub partner: usize,
    /// Partner obtained by reporting truthfully.
    pub truthful_partner: usize,
}

/// Tries every other preference list for `agent`, in lexicographic order,
/// and returns the first one under which `procedure` gives the agent a
/// partner that is better by their true list.
pub fn find_matching_manipulation(
    instance: &MatchingInstance,
    procedure: &Procedure,
    agent: Agent,
) -> Result<Option<Misreport>, MatchingError> {
    let n = instance.n();
    if n > MAX_PROBE_SIZE {
        return Err(MatchingError::TooLarge {
            n,
            limit: MAX_PROBE_SIZE,
        });
    }
    instance.check_agent(agent)?;
    let truthful_partner = procedure.run(instance)?.partner(agent);
    let truth = instance.prefs(agent).to_vec();
    for list in (0..n).permutations(n) {
        if list == truth {
            continue;
        }
        let reported = instance.with_prefs(agent, list.clone())?;
        let partner = procedure.run(&reported)?.partner(agent);
        if instance.rank(agent, partner) < instance.rank(agent, truthful_partner) {
            return Ok(Some(Misreport {
                list,
                partner,
                truthful_partner,
            }));
        }
    }
    Ok(None)
}

use itertools::Itertools;
use maniplab::matching::{
    enumerate_stable, gale_shapley, is_stable, popular_stable_procedure, Agent, Matching,
    MatchingInstance, Side, Stability,
};
use maniplab::{RuleKind, Seed, TieBreakPolicy};
use proptest::prelude::*;

/// Straightforward restatement of the popular procedure, kept separate from
/// the library: popularity by elimination rounds over the full lists and
/// filtering by explicit partner ranks.
fn popular_reference(inst: &MatchingInstance, first: Side) -> Matching {
    let n = inst.n();
    let order = |ranked: Side| -> Vec<usize> {
        let voters = inst.lists(ranked.other());
        let mut left: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        while !left.is_empty() {
            // STV over `left`, LexMin eliminates the lowest index on ties.
            let mut alive = left.clone();
            let winner = loop {
                let mut tally = vec![0usize; n];
                for list in voters {
                    let top = *list.iter().find(|x| alive.contains(x)).unwrap();
                    tally[top] += 1;
                }
                if let Some(&w) = alive.iter().find(|&&c| 2 * tally[c] > voters.len()) {
                    break w;
                }
                if alive.len() == 1 {
                    break alive[0];
                }
                let low = alive.iter().map(|&c| tally[c]).min().unwrap();
                let out_idx = alive.iter().position(|&c| tally[c] == low).unwrap();
                alive.remove(out_idx);
            };
            out.push(winner);
            left.retain(|&x| x != winner);
        }
        out
    };
    let (a, b) = (order(first), order(first.other()));
    let mut pool: Vec<Vec<usize>> = (0..n)
        .permutations(n)
        .filter(|w| {
            (0..n).cartesian_product(0..n).all(|(m, x)| {
                let h = w.iter().position(|&y| y == x).unwrap();
                !(inst.rank(Agent::man(m), x) < inst.rank(Agent::man(m), w[m])
                    && inst.rank(Agent::woman(x), m) < inst.rank(Agent::woman(x), h))
            })
        })
        .collect();
    for k in 0..n {
        for agent in [
            Agent {
                side: first,
                index: a[k],
            },
            Agent {
                side: first.other(),
                index: b[k],
            },
        ] {
            let partner = |w: &Vec<usize>| match agent.side {
                Side::Men => w[agent.index],
                Side::Women => w.iter().position(|&y| y == agent.index).unwrap(),
            };
            let best = pool
                .iter()
                .map(|w| inst.rank(agent, partner(w)))
                .min()
                .unwrap();
            pool.retain(|w| inst.rank(agent, partner(w)) == best);
        }
    }
    Matching::new(pool.remove(0)).unwrap()
}

#[test]
fn gale_shapley_is_stable_on_random_instances() {
    for seed in 0..300u64 {
        let n = 1 + (seed as usize * 7) % 64;
        let inst = MatchingInstance::random(n, Seed(seed));
        for side in [Side::Men, Side::Women] {
            assert_eq!(
                is_stable(&inst, &gale_shapley(&inst, side)),
                Stability::Stable
            );
        }
    }
}

#[test]
fn popular_procedure_matches_reference() {
    for seed in 0..200u64 {
        let inst = MatchingInstance::random(1 + seed as usize % 5, Seed(seed));
        for first in [Side::Women, Side::Men] {
            let lib =
                popular_stable_procedure(&inst, RuleKind::Stv, &TieBreakPolicy::LexMin, first)
                    .unwrap();
            assert_eq!(lib, popular_reference(&inst, first), "seed {seed}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn proposing_side_optimality_and_lattice(seed in 0u64..1_000_000, n in 1usize..7) {
        let inst = MatchingInstance::random(n, Seed(seed));
        let stable = enumerate_stable(&inst).unwrap();
        let men = gale_shapley(&inst, Side::Men);
        let women = gale_shapley(&inst, Side::Women);
        prop_assert!(stable.contains(&men) && stable.contains(&women));
        prop_assert_eq!(men == women, stable.len() == 1);
        for s in &stable {
            for i in 0..n {
                prop_assert!(inst.rank(Agent::man(i), men.wife(i)) <= inst.rank(Agent::man(i), s.wife(i)));
                prop_assert!(inst.rank(Agent::woman(i), women.husband(i)) <= inst.rank(Agent::woman(i), s.husband(i)));
            }
        }
        let all = (0..n).permutations(n).count();
        let unstable = (0..n)
            .permutations(n)
            .map(|w| Matching::new(w).unwrap())
            .filter(|m| is_stable(&inst, m) != Stability::Stable)
            .count();
        prop_assert_eq!(stable.len() + unstable, all);
    }

    #[test]
    fn popular_output_is_stable(seed in 0u64..1_000_000, n in 1usize..7, veto in any::<bool>(), lexmax in any::<bool>()) {
        let inst = MatchingInstance::random(n, Seed(seed));
        let rule = if veto { RuleKind::Veto } else { RuleKind::Stv };
        let policy = if lexmax { TieBreakPolicy::LexMax } else { TieBreakPolicy::LexMin };
        let out = popular_stable_procedure(&inst, rule, &policy, Side::Women).unwrap();
        prop_assert!(enumerate_stable(&inst).unwrap().contains(&out));
        let mirrored = popular_stable_procedure(&inst.swap_sides(), rule, &policy, Side::Men).unwrap();
        prop_assert_eq!(mirrored, out.mirror());
    }
}

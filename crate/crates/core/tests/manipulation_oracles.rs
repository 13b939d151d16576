use maniplab::generators::impartial_culture;
use maniplab::manipulation::{
    achieves_goal, brute_force_manipulate, stv_constructive, veto_constructive_weighted,
    veto_destructive_weighted, CoalitionBallots, ManipulationQuery, Stv, Veto,
};
use maniplab::{Profile, Seed, TieBreakPolicy, VetoProfile};
use proptest::prelude::*;
use rand::Rng;

fn policies() -> [TieBreakPolicy; 3] {
    [
        TieBreakPolicy::LexMin,
        TieBreakPolicy::LexMax,
        TieBreakPolicy::FixedOrder(vec![2, 0, 1, 3, 4]),
    ]
}

#[test]
fn stv_search_matches_brute_force_across_policies_and_coalitions() {
    let mut rng = Seed(99).rng();
    for trial in 0..600u64 {
        let m = rng.random_range(2..=5usize);
        let n = rng.random_range(0..=9usize);
        let fixed = impartial_culture(m, n, Seed(trial));
        let k = rng.random_range(1..=3usize);
        let coalition: Vec<u64> = (0..k).map(|_| rng.random_range(1..=2)).collect();
        let target = rng.random_range(0..m);
        let policy = match &policies()[trial as usize % 3] {
            TieBreakPolicy::FixedOrder(o) => {
                TieBreakPolicy::FixedOrder(o.iter().copied().filter(|&c| c < m).collect())
            }
            p => p.clone(),
        };
        let q = ManipulationQuery::constructive(fixed, coalition, target).with_policy(policy);
        let search = stv_constructive(&q, None).unwrap();
        let oracle = brute_force_manipulate::<Stv>(&q, CoalitionBallots::Identical).unwrap();
        assert_eq!(search.is_found(), oracle.is_found(), "{q:?}");
        if let Some(w) = search.witness() {
            assert!(achieves_goal::<Stv>(&q, w).unwrap());
        }
    }
}

fn random_veto_instance(rng: &mut impl Rng) -> (VetoProfile, Vec<u64>, usize) {
    let m = rng.random_range(1..=4usize);
    let voters = rng.random_range(0..=6usize);
    let fixed = VetoProfile::from_weighted(
        m,
        (0..voters).map(|_| (rng.random_range(0..m), rng.random_range(1..=4u64))),
    )
    .unwrap();
    let k = rng.random_range(1..=4usize);
    let coalition = (0..k).map(|_| rng.random_range(1..=4u64)).collect();
    (fixed, coalition, rng.random_range(0..m))
}

#[test]
fn destructive_dominance_over_all_assignments() {
    // If vetoing the target with everyone fails, no assignment succeeds.
    let mut rng = Seed(5).rng();
    for _ in 0..500 {
        let (fixed, coalition, target) = random_veto_instance(&mut rng);
        let q = ManipulationQuery::destructive(fixed, coalition, target);
        let fast = veto_destructive_weighted(&q).unwrap();
        let oracle = brute_force_manipulate::<Veto>(&q, CoalitionBallots::Distinct).unwrap();
        assert_eq!(fast.is_found(), oracle.is_found(), "{q:?}");
    }
}

#[test]
fn stv_coalition_identical_model_is_weaker_than_distinct() {
    // Anything the identical-ballot model finds, distinct ballots find too.
    let mut rng = Seed(8).rng();
    for trial in 0..60u64 {
        let m = rng.random_range(2..=4usize);
        let fixed = impartial_culture(m, rng.random_range(1..=6), Seed(1000 + trial));
        let q = ManipulationQuery::constructive(fixed, vec![1, 1], rng.random_range(0..m));
        let identical = stv_constructive(&q, None).unwrap();
        let distinct = brute_force_manipulate::<Stv>(&q, CoalitionBallots::Distinct).unwrap();
        if identical.is_found() {
            assert!(distinct.is_found());
        }
    }
}

#[test]
fn unanimous_empty_profile() {
    let q = ManipulationQuery::constructive(Profile::new(5), vec![1], 4);
    assert!(stv_constructive(&q, None).unwrap().is_found());
    assert!(
        brute_force_manipulate::<Stv>(&q, CoalitionBallots::Identical)
            .unwrap()
            .is_found()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn veto_weight_splitting_never_hurts(
        counts in proptest::collection::vec(0u64..6, 2..5),
        weights in proptest::collection::vec(1u64..6, 1..4),
        split_at in 0usize..4,
        target_seed in 0usize..5,
    ) {
        let m = counts.len();
        let target = target_seed % m;
        let fixed = VetoProfile::from_weighted(
            m,
            counts.iter().enumerate().filter(|(_, &w)| w > 0).map(|(c, &w)| (c, w)),
        ).unwrap();
        let idx = split_at % weights.len();
        let mut split = weights.clone();
        let w = split[idx];
        if w >= 2 {
            split[idx] = 1;
            split.push(w - 1);
        }
        // Splitting can only add options for constructive covering (two halves
        // may go to different rivals), and never matters for destructive.
        let qa = ManipulationQuery::constructive(fixed.clone(), weights.clone(), target);
        let qb = ManipulationQuery::constructive(fixed.clone(), split.clone(), target);
        if veto_constructive_weighted(&qa).unwrap().is_found() {
            prop_assert!(veto_constructive_weighted(&qb).unwrap().is_found());
        }
        let qa = ManipulationQuery::destructive(fixed.clone(), weights, target);
        let qb = ManipulationQuery::destructive(fixed, split, target);
        prop_assert_eq!(
            veto_destructive_weighted(&qa).unwrap().is_found(),
            veto_destructive_weighted(&qb).unwrap().is_found()
        );
    }

    #[test]
    fn stv_profile_anonymity_and_weight_merge(
        seed in 0u64..10_000,
        m in 2usize..6,
        n in 1usize..8,
        target_seed in 0usize..6,
    ) {
        let base = impartial_culture(m, n, Seed(seed));
        let target = target_seed % m;
        // Reverse entry order and merge the first ballot's weight into a copy.
        let mut reversed = Profile::new(m);
        for (b, w) in base.entries().iter().rev() {
            reversed.push(b.clone(), *w).unwrap();
        }
        let mut merged = Profile::new(m);
        let first = &base.entries()[0];
        merged.push(first.0.clone(), first.1 + 1).unwrap();
        for (b, w) in base.entries().iter().skip(1) {
            merged.push(b.clone(), *w).unwrap();
        }
        let mut split = base.clone();
        split.push(first.0.clone(), 1).unwrap();

        let policy = TieBreakPolicy::LexMin;
        let w1 = maniplab::rules::stv_winner(&base, &policy).unwrap();
        let w2 = maniplab::rules::stv_winner(&reversed, &policy).unwrap();
        prop_assert_eq!(w1, w2);
        prop_assert_eq!(
            maniplab::rules::stv_winner(&merged, &policy).unwrap(),
            maniplab::rules::stv_winner(&split, &policy).unwrap()
        );

        let qa = ManipulationQuery::constructive(base, vec![1], target);
        let qb = ManipulationQuery::constructive(reversed, vec![1], target);
        let a = stv_constructive(&qa, None).unwrap();
        let b = stv_constructive(&qb, None).unwrap();
        prop_assert_eq!(a.is_found(), b.is_found());
        prop_assert_eq!(a.stats.nodes, b.stats.nodes);
    }
}

#[test]
fn splitting_a_member_can_enable_constructive_veto() {
    // Rivals 1 and 2 each need one more veto; one member of weight 2 can
    // only veto one of them, two members of weight 1 can cover both.
    let fixed = VetoProfile::from_weighted(3, [(0, 1)]).unwrap();
    let whole = ManipulationQuery::constructive(fixed.clone(), vec![2], 0);
    let split = ManipulationQuery::constructive(fixed, vec![1, 1], 0);
    assert!(!veto_constructive_weighted(&whole).unwrap().is_found());
    assert!(veto_constructive_weighted(&split).unwrap().is_found());
}

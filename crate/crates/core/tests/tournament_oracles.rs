use maniplab::tournaments::{
    achievable_winners, can_beat, cup_honest_winner, cup_min_throws, cup_possible_winners,
    cup_win_probability, rr_can_win, rr_min_throws, simulate_cup, BeatsModel, Bracket, Coalition,
    RrWinCondition, ThrowPolicy,
};
use maniplab::{Seed, TieBreakPolicy};
use proptest::prelude::*;

fn coalition_from_mask(t: usize, mask: u32) -> Coalition {
    Coalition::new(t, (0..t).filter(|&x| mask >> x & 1 == 1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn cup_coalition_monotonicity(seed in 0u64..100_000, log_t in 0u32..4, small in any::<u32>(), extra in any::<u32>()) {
        let t = 1usize << log_t;
        let model = BeatsModel::random(t, Seed(seed));
        let bracket = Bracket::random(t, Seed(seed ^ 0xabc)).unwrap();
        let mask = small & ((1 << t) - 1);
        let inner = coalition_from_mask(t, mask);
        let outer = coalition_from_mask(t, mask | (extra & ((1 << t) - 1)));
        prop_assert!(inner.is_subset(&outer));
        let a = cup_possible_winners(&bracket, &model, &inner).unwrap();
        let b = cup_possible_winners(&bracket, &model, &outer).unwrap();
        for x in 0..t {
            prop_assert!(!a.can_win(x) || b.can_win(x));
            let (ca, cb) = (
                cup_min_throws(&bracket, &model, &inner, x).unwrap(),
                cup_min_throws(&bracket, &model, &outer, x).unwrap(),
            );
            if let Some(ca) = ca {
                prop_assert!(cb.unwrap() <= ca);
            }
        }
    }

    #[test]
    fn cup_zero_throws_iff_honest_winner(seed in 0u64..100_000, log_t in 0u32..4, mask in any::<u32>()) {
        let t = 1usize << log_t;
        let model = BeatsModel::random(t, Seed(seed));
        let bracket = Bracket::random(t, Seed(seed + 1)).unwrap();
        let c = coalition_from_mask(t, mask & ((1 << t) - 1));
        let honest = cup_honest_winner(&bracket, &model).unwrap();
        for x in 0..t {
            prop_assert_eq!(cup_min_throws(&bracket, &model, &c, x).unwrap() == Some(0), x == honest);
        }
        let none = cup_possible_winners(&bracket, &model, &Coalition::empty(t)).unwrap();
        prop_assert_eq!(none.root(), &[honest][..]);
    }

    #[test]
    fn rr_coalition_monotonicity(seed in 0u64..100_000, t in 1usize..7, small in any::<u32>(), extra in any::<u32>(), target_seed in 0usize..6, strict in any::<bool>()) {
        let model = BeatsModel::random(t, Seed(seed));
        let mask = small & ((1 << t) - 1);
        let inner = coalition_from_mask(t, mask);
        let outer = coalition_from_mask(t, mask | (extra & ((1 << t) - 1)));
        let target = target_seed % t;
        let cond = if strict { RrWinCondition::Strict } else { RrWinCondition::TieBreak(TieBreakPolicy::LexMax) };
        let a = rr_min_throws(&model, &inner, target, &cond).unwrap();
        let b = rr_min_throws(&model, &outer, target, &cond).unwrap();
        if let Some(a) = a {
            prop_assert!(b.unwrap() <= a);
        }
        prop_assert_eq!(a.is_some(), rr_can_win(&model, &inner, target, &cond).unwrap().is_some());
    }

    #[test]
    fn honest_winner_always_achievable(seed in 0u64..100_000, t in 2usize..9, mask in any::<u32>()) {
        let model = BeatsModel::random(t, Seed(seed));
        let c = coalition_from_mask(t, mask & ((1 << t) - 1));
        for i in 0..t {
            for j in 0..t {
                if i != j {
                    let w = model.beats(i, j);
                    let loser = i + j - w;
                    prop_assert!(achievable_winners(&model, &c, i, j).contains(&w));
                    prop_assert!(can_beat(&model, &c, w, loser));
                }
            }
        }
    }
}

#[test]
fn semifinal_throw_matches_monte_carlo() {
    // Four even teams; team 1 throws its semifinal against the target 0.
    let model = BeatsModel::from_probabilities(4, |_, _| 0.5).unwrap();
    let bracket = Bracket::identity(4).unwrap();
    let c = Coalition::new(4, [1]).unwrap();
    let dp = cup_win_probability(&bracket, &model, &c, 0, ThrowPolicy::ThrowToTarget).unwrap();
    let mut rng = Seed(17).rng();
    let trials = 100_000;
    let wins = (0..trials)
        .filter(|_| {
            simulate_cup(
                &bracket,
                &model,
                &c,
                0,
                ThrowPolicy::ThrowToTarget,
                &mut rng,
            )
            .unwrap()
                == 0
        })
        .count();
    assert!((wins as f64 / trials as f64 - dp).abs() < 0.01);
    assert!((dp - 0.5).abs() < 1e-15);
}

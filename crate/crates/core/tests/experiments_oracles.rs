use itertools::Itertools;
use maniplab::experiments::{
    emit_csv, estimate_coalition_success, run_sweep, run_sweep_with_threads, CoalitionSpec,
    Distribution, Sweep, SweepSpec, TargetMode,
};
use maniplab::generators::UrnParams;
use maniplab::manipulation::{
    brute_force_manipulate, CoalitionBallots, ManipulationQuery, Stv, Veto,
};
use maniplab::{Ballot, Profile, RuleKind, Seed, TieBreakPolicy};
use proptest::prelude::*;

#[test]
fn single_stv_manipulator_matches_full_enumeration() {
    // Exact probability over all 6^4 ordered IC profiles and all 3 targets.
    let ballots: Vec<Ballot> = (0..3)
        .permutations(3)
        .map(|p| Ballot::new(p, 3).unwrap())
        .collect();
    let mut hits = 0u32;
    let mut cases = 0u32;
    for combo in (0..4).map(|_| 0..6).multi_cartesian_product() {
        let fixed =
            Profile::from_weighted(3, combo.iter().map(|&i| (ballots[i].ranking().to_vec(), 1)))
                .unwrap();
        for target in 0..3 {
            let q = ManipulationQuery::constructive(fixed.clone(), vec![1], target);
            hits += u32::from(
                brute_force_manipulate::<Stv>(&q, CoalitionBallots::Identical)
                    .unwrap()
                    .is_found(),
            );
            cases += 1;
        }
    }
    let exact = f64::from(hits) / f64::from(cases);

    let est = estimate_coalition_success(&CoalitionSpec {
        rule: RuleKind::Stv,
        m: 3,
        n: 4,
        k: 1,
        distribution: Distribution::Ic,
        target_mode: TargetMode::RandomCandidate,
        trials: 4000,
        seed: Seed(2024),
        policy: TieBreakPolicy::LexMin,
    })
    .unwrap();
    assert!(
        (est.p_hat - exact).abs() <= 3.0 * est.half_width(),
        "estimate {} vs exact {exact} (half-width {})",
        est.p_hat,
        est.half_width()
    );
}

#[test]
fn empty_coalition_cannot_help_a_loser() {
    // Every resampled voter ranks 2 last.
    let dir = tempfile_dir();
    let path = dir.join("records.txt");
    std::fs::write(&path, "m=3 n=2\n2: 0>1>2\n").unwrap();
    let est = estimate_coalition_success(&CoalitionSpec {
        rule: RuleKind::Stv,
        m: 3,
        n: 5,
        k: 0,
        distribution: Distribution::File(path),
        target_mode: TargetMode::Fixed(2),
        trials: 50,
        seed: Seed(1),
        policy: TieBreakPolicy::LexMin,
    })
    .unwrap();
    assert_eq!(est.p_hat, 0.0);
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "maniplab-exp-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn dictator_with_no_voters() {
    // A lone veto only removes one candidate, so veto needs m = 2.
    for (rule, m) in [(RuleKind::Stv, 4), (RuleKind::Veto, 2)] {
        let est = estimate_coalition_success(&CoalitionSpec {
            rule,
            m,
            n: 0,
            k: 1,
            distribution: Distribution::Ic,
            target_mode: TargetMode::RandomCandidate,
            trials: 30,
            seed: Seed(5),
            policy: TieBreakPolicy::LexMin,
        })
        .unwrap();
        assert_eq!(est.p_hat, 1.0, "{rule}");
    }
}

#[test]
fn veto_coalition_outvoting_two_candidates() {
    // With two candidates, n + 1 unit vetoes on the rival always suffice.
    for n in 0..6 {
        let mut spec = SweepSpec::new(RuleKind::Veto, Sweep::VaryN { m: 2, lo: n, hi: n }, 200);
        spec.coalition_size = n + 1;
        spec.target_mode = TargetMode::Fixed(1);
        let r = &run_sweep(&spec).unwrap()[0];
        assert_eq!(r.p_manipulable, 1.0);
    }
}

#[test]
fn veto_coalition_covering_every_deficit() {
    // Each rival needs at most n + 1 extra vetoes, so (m - 1)(n + 1) unit
    // manipulators always succeed; brute force agrees on the small points.
    for m in 2..=4usize {
        for n in 0..=3usize {
            let k = (m - 1) * (n + 1);
            let mut spec = SweepSpec::new(RuleKind::Veto, Sweep::VaryN { m, lo: n, hi: n }, 100);
            spec.coalition_size = k;
            let r = &run_sweep(&spec).unwrap()[0];
            assert_eq!(r.p_manipulable, 1.0, "m={m} n={n}");
            if (m as f64).powi(k as i32) <= 1e5 {
                for trial in 0..20u64 {
                    let fixed =
                        maniplab::generators::impartial_culture(m, n, Seed(trial)).sincere_vetoes();
                    for target in 0..m {
                        let q = ManipulationQuery::constructive(fixed.clone(), vec![1; k], target);
                        assert!(
                            brute_force_manipulate::<Veto>(&q, CoalitionBallots::Distinct)
                                .unwrap()
                                .is_found()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn n_plus_one_vetoes_are_not_enough_with_three_candidates() {
    // Both voters veto the target; each of the two rivals needs two vetoes.
    let fixed = maniplab::VetoProfile::from_weighted(3, [(0, 2)]).unwrap();
    let q = ManipulationQuery::constructive(fixed, vec![1; 3], 0);
    assert!(
        !brute_force_manipulate::<Veto>(&q, CoalitionBallots::Distinct)
            .unwrap()
            .is_found()
    );
}

#[test]
fn records_do_not_depend_on_thread_count() {
    let mut spec = SweepSpec::new(
        RuleKind::Stv,
        Sweep::VaryM {
            n: 12,
            lo: 3,
            hi: 9,
        },
        120,
    );
    spec.distribution = Distribution::Urn(UrnParams { a: 2 });
    spec.seed = Seed(31);
    spec.node_budget = Some(40);
    let one = emit_csv(&run_sweep_with_threads(&spec, 1).unwrap());
    let four = emit_csv(&run_sweep_with_threads(&spec, 4).unwrap());
    assert_eq!(one, four);
    assert_eq!(one, emit_csv(&run_sweep(&spec).unwrap()));
}

#[test]
fn csv_round_trips_through_a_parser() {
    let spec = SweepSpec::new(RuleKind::Stv, Sweep::VaryN { m: 4, lo: 5, hi: 5 }, 50);
    let records = run_sweep(&spec).unwrap();
    let text = emit_csv(&records);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.len(), 8);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let r = &records[0];
    assert_eq!(rows[0][0].parse::<usize>().unwrap(), r.m);
    assert_eq!(rows[0][1].parse::<usize>().unwrap(), r.n);
    let p: f64 = rows[0][2].parse().unwrap();
    assert!((p - r.p_manipulable).abs() < 5e-7);
    let mean: f64 = rows[0][3].parse().unwrap();
    let ratio: f64 = rows[0][7].parse().unwrap();
    assert!((ratio - mean / 1.62f64.powi(4)).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn accounting_and_reproducibility(
        seed in 0u64..1000,
        rule_is_stv in any::<bool>(),
        k in 0usize..3,
        budget in prop::option::of(1u64..20),
        dist in 0usize..4,
    ) {
        let rule = if rule_is_stv { RuleKind::Stv } else { RuleKind::Veto };
        let mut spec = SweepSpec::new(rule, Sweep::VaryM { n: 5, lo: 1, hi: 6 }, 30);
        spec.seed = Seed(seed);
        spec.coalition_size = k;
        spec.node_budget = budget;
        spec.distribution = [
            Distribution::Ic,
            Distribution::Urn(UrnParams { a: 1 }),
            Distribution::SinglePeaked,
            Distribution::SingleTroughed,
        ][dist].clone();
        let first = run_sweep(&spec).unwrap();
        for r in &first {
            prop_assert_eq!(r.found + r.impossible + r.undecided + r.errors, r.trials);
            if r.decided() > 0 {
                prop_assert!((0.0..=1.0).contains(&r.p_manipulable));
                prop_assert!(r.median_nodes <= r.p90_nodes);
            }
        }
        prop_assert_eq!(emit_csv(&first), emit_csv(&run_sweep(&spec).unwrap()));
    }
}

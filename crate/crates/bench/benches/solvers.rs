use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maniplab::generators::impartial_culture;
use maniplab::manipulation::{stv_constructive, veto_constructive_weighted, ManipulationQuery};
use maniplab::matching::{gale_shapley, MatchingInstance, Side};
use maniplab::tournaments::{
    cup_min_throws, cup_win_distribution, rr_min_throws, BeatsModel, Bracket, Coalition,
    RrWinCondition, ThrowPolicy,
};
use maniplab::{Seed, VetoProfile};

fn stv_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("stv_constructive");
    for m in [6usize, 10, 14] {
        let queries: Vec<_> = (0..16u64)
            .map(|i| {
                ManipulationQuery::constructive(
                    impartial_culture(m, 16, Seed(i)),
                    vec![1],
                    (i as usize) % m,
                )
            })
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(m), &queries, |b, qs| {
            b.iter(|| {
                for q in qs {
                    black_box(stv_constructive(q, None).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn veto_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("veto_constructive");
    for k in [4usize, 8, 16] {
        let fixed = VetoProfile::from_weighted(8, (0..8).map(|c| (c, 1 + c as u64))).unwrap();
        let weights: Vec<u64> = (0..k).map(|i| 1 + (i as u64 * 7) % 5).collect();
        let q = ManipulationQuery::constructive(fixed, weights, 7);
        group.bench_with_input(BenchmarkId::from_parameter(k), &q, |b, q| {
            b.iter(|| black_box(veto_constructive_weighted(q).unwrap()))
        });
    }
    group.finish();
}

fn cup(c: &mut Criterion) {
    let mut group = c.benchmark_group("cup");
    for t in [8usize, 32, 128] {
        let model = BeatsModel::random(t, Seed(1));
        let bracket = Bracket::random(t, Seed(2)).unwrap();
        let coalition = Coalition::new(t, (0..t).step_by(3)).unwrap();
        group.bench_with_input(BenchmarkId::new("min_throws", t), &t, |b, _| {
            b.iter(|| black_box(cup_min_throws(&bracket, &model, &coalition, 1).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("win_distribution", t), &t, |b, _| {
            b.iter(|| {
                black_box(
                    cup_win_distribution(
                        &bracket,
                        &model,
                        &coalition,
                        1,
                        ThrowPolicy::ThrowToTarget,
                    )
                    .unwrap(),
                )
            })
        });
    }
    group.finish();
}

fn round_robin(c: &mut Criterion) {
    let mut group = c.benchmark_group("rr_min_throws");
    for t in [6usize, 12, 24] {
        let model = BeatsModel::random(t, Seed(3));
        let coalition = Coalition::new(t, (0..t).step_by(2)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, _| {
            b.iter(|| {
                black_box(
                    rr_min_throws(&model, &coalition, t - 1, &RrWinCondition::Strict).unwrap(),
                )
            })
        });
    }
    group.finish();
}

fn deferred_acceptance(c: &mut Criterion) {
    let mut group = c.benchmark_group("gale_shapley");
    for n in [16usize, 64, 256] {
        let inst = MatchingInstance::random(n, Seed(4));
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| black_box(gale_shapley(inst, Side::Men)))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    stv_search,
    veto_solver,
    cup,
    round_robin,
    deferred_acceptance
);
criterion_main!(benches);

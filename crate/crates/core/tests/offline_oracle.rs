mod common;

use num::Zero;
use owct_core::model::{int, validate, CosInstance, Instance, Rational};
use owct_core::offline::{
    build_permutation_schedule, dp_optimal_cos, greedy_2approx_cos, OfflineScheduler,
};
use owct_core::oracle::brute_opt_perm_cos;
use proptest::prelude::*;
use rand::Rng;

fn small_cos() -> impl Strategy<Value = CosInstance> {
    (1usize..=6, 1usize..=3).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(0i64..=9, n), m),
            prop::collection::vec(0i64..=6, n),
            prop::collection::vec(0i64..=5, n),
        )
            .prop_map(|(p, r, w)| {
                let rows: Vec<&[i64]> = p.iter().map(Vec::as_slice).collect();
                CosInstance::from_ints_released(&rows, &r, &w).unwrap()
            })
    })
}

#[test]
fn dp_matches_permutation_enumeration() {
    for seed in 0..200u64 {
        let mut rng = common::rng(seed);
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=4);
        let inst = common::random_cos(&mut rng, n, m, 1, 20, 0);
        let jobs: Vec<usize> = (0..n).collect();
        let (order, v) = dp_optimal_cos(&inst, &jobs).unwrap();
        let (_, brute) = brute_opt_perm_cos(&inst, false).unwrap();
        assert_eq!(v, brute, "seed {seed}");
        assert!(order.covers(&jobs));
        let s = build_permutation_schedule(&inst, order.as_slice(), &Rational::zero(), false);
        assert_eq!(s.weighted_completion(inst.weights()), v);
    }
}

#[test]
fn greedy_within_twice_dp() {
    for seed in 0..300u64 {
        let mut rng = common::rng(1000 + seed);
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=4);
        let inst = common::random_cos(&mut rng, n, m, 1, 20, 0);
        let jobs: Vec<usize> = (0..n).collect();
        let (_, opt) = dp_optimal_cos(&inst, &jobs).unwrap();
        let order = greedy_2approx_cos(&inst, &jobs);
        assert!(order.covers(&jobs));
        let s = build_permutation_schedule(&inst, order.as_slice(), &Rational::zero(), false);
        assert!(
            s.weighted_completion(inst.weights()) <= opt * int(2),
            "seed {seed}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn permutation_schedule_has_no_idle_time(inst in small_cos(), offset in 0i64..=5, seed in any::<u64>()) {
        let n = inst.n();
        let mut rng = common::rng(seed);
        let mut order: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
        // shuffle
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let s = build_permutation_schedule(&inst, &order, &int(offset), false);
        validate(&Instance::Cos(inst.without_releases()), &s).unwrap();
        let span = if order.iter().all(|&j| inst.max_component(j).is_zero()) {
            Rational::zero()
        } else {
            s.makespan() - int(offset)
        };
        prop_assert_eq!(span, inst.batch_makespan(&order));
    }

    #[test]
    fn ignoring_releases_never_hurts(inst in small_cos(), mask in any::<u8>()) {
        let subset: Vec<usize> = (0..inst.n()).filter(|j| mask >> j & 1 == 1).collect();
        let sub = inst.restrict(&subset);
        let all: Vec<usize> = (0..sub.n()).collect();
        let (_, relaxed) = dp_optimal_cos(&sub, &all).unwrap();
        let (_, with_releases) = brute_opt_perm_cos(&sub, true).unwrap();
        prop_assert!(relaxed <= with_releases);
    }

    #[test]
    fn schedulers_emit_valid_schedules(inst in small_cos(), offset in 0i64..=9) {
        let jobs: Vec<usize> = (0..inst.n()).collect();
        let plain = Instance::Cos(inst.without_releases());
        for sched in [OfflineScheduler::Dp, OfflineScheduler::Greedy] {
            let s = sched.schedule(&plain, &jobs, &int(offset)).unwrap();
            validate(&plain, &s).unwrap();
            prop_assert!(s.makespan() <= int(offset) + inst.batch_makespan(&jobs));
        }
    }
}

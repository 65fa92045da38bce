mod common;

use num::Zero;
use owct_core::model::{
    coflow_to_cos, int, ratio, ClusterInstance, CosInstance, Instance, Rational,
};
use owct_core::muwp::{
    exact_muwp, knapsack_muwp_fixed_m, lp_round_muwp_cluster, lp_round_muwp_cos, MuwpSolver,
};
use owct_core::offline::{list_schedule_cluster, OfflineScheduler};
use owct_core::oracle::{brute_cluster_makespan, brute_mswp};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn pending(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut r: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.8)).collect();
    if r.is_empty() {
        r.push(rng.gen_range(0..n));
    }
    r.shuffle(rng);
    r
}

fn deadline(rng: &mut ChaCha8Rng, span: &Rational) -> Rational {
    // between zero and a bit past the full batch
    let t = rng.gen_range(0..=12);
    span * ratio(t, 10)
}

fn weight(inst: &Instance, jobs: &[usize]) -> Rational {
    jobs.iter().map(|&j| &inst.weights()[j]).sum()
}

fn cluster_best(inst: &ClusterInstance, jobs: &[usize], d: &Rational) -> Rational {
    let mut best = Rational::zero();
    for mask in 0u32..(1 << jobs.len()) {
        let s: Vec<usize> = (0..jobs.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| jobs[b])
            .collect();
        let w: Rational = s.iter().map(|&j| &inst.weights()[j]).sum();
        if w > best && brute_cluster_makespan(inst, &s).unwrap() <= *d {
            best = w;
        }
    }
    best
}

#[test]
fn exact_matches_subset_oracle_on_open_shop_and_coflow() {
    for seed in 0..150u64 {
        let mut rng = common::rng(seed);
        let n = rng.gen_range(1..=12);
        let inst = if seed % 2 == 0 {
            let m = rng.gen_range(1..=3);
            Instance::Cos(common::random_cos(&mut rng, n, m, 0, 9, 0))
        } else {
            Instance::Coflow(common::random_coflow(&mut rng, n, 2, 4, 0))
        };
        let cos = inst.cos_view().unwrap();
        let r = pending(&mut rng, n);
        let d = deadline(&mut rng, &cos.batch_makespan(&r));
        let s = exact_muwp(&inst, &r, &d).unwrap();
        let (_, opt) = brute_mswp(&cos, &r, &d).unwrap();
        assert_eq!(weight(&inst, &s.selected), opt, "seed {seed}");
        assert!(cos.batch_makespan(&s.selected) <= d);
        assert_eq!(s.unscheduled_weight, weight(&inst, &r) - opt);
    }
}

#[test]
fn exact_matches_subset_oracle_on_clusters() {
    for seed in 0..60u64 {
        let mut rng = common::rng(500 + seed);
        let n = rng.gen_range(1..=5);
        let inst = common::random_cluster(&mut rng, n, 2, 3, 2, 0);
        let r = pending(&mut rng, n);
        let d = int(rng.gen_range(0..=30));
        let s = exact_muwp(&Instance::Cluster(inst.clone()), &r, &d).unwrap();
        let w: Rational = s.selected.iter().map(|&j| &inst.weights()[j]).sum();
        assert_eq!(w, cluster_best(&inst, &r, &d), "seed {seed}");
        assert!(brute_cluster_makespan(&inst, &s.selected).unwrap() <= d);
        let sched = list_schedule_cluster(&inst, &s.selected, &Rational::zero(), false);
        assert!(sched.makespan() <= &d * &s.alpha);
    }
}

#[test]
fn lp_rounding_guarantees() {
    for seed in 0..300u64 {
        let mut rng = common::rng(2000 + seed);
        let n = rng.gen_range(1..=12);
        let m = rng.gen_range(1..=4);
        let inst = common::random_cos(&mut rng, n, m, 0, 12, 0);
        let r = pending(&mut rng, n);
        let d = deadline(&mut rng, &inst.batch_makespan(&r));
        let s = lp_round_muwp_cos(&inst, &r, &d).unwrap();
        let opt = exact_muwp(&Instance::Cos(inst.clone()), &r, &d)
            .unwrap()
            .unscheduled_weight;
        let lp = s.lp_value.clone().unwrap();
        assert!(lp <= opt, "relaxation above integer optimum, seed {seed}");
        assert!(s.unscheduled_weight <= int(2) * &lp, "seed {seed}");
        assert!(
            inst.batch_makespan(&s.selected) <= int(2) * &d,
            "seed {seed}"
        );
    }
}

#[test]
fn lp_rounding_on_coflows_through_the_reduction() {
    for seed in 0..100u64 {
        let mut rng = common::rng(3000 + seed);
        let n = rng.gen_range(1..=10);
        let inst = Instance::Coflow(common::random_coflow(&mut rng, n, 2, 5, 0));
        let cos = inst.cos_view().unwrap().into_owned();
        let r = pending(&mut rng, n);
        let d = deadline(&mut rng, &cos.batch_makespan(&r));
        let s = MuwpSolver::Lp2.solve(&inst, &r, &d).unwrap();
        let opt = exact_muwp(&inst, &r, &d).unwrap().unscheduled_weight;
        assert!(s.unscheduled_weight <= int(2) * opt);
        let sched = OfflineScheduler::Dp
            .schedule(&inst, &s.selected, &Rational::zero())
            .unwrap();
        assert!(sched.makespan() <= int(2) * &d);
    }
}

#[test]
fn knapsack_dual_guarantee() {
    for seed in 0..80u64 {
        let mut rng = common::rng(4000 + seed);
        let n = rng.gen_range(1..=10);
        let m = rng.gen_range(1..=3);
        let eps = if seed % 2 == 0 {
            ratio(1, 10)
        } else {
            ratio(1, 2)
        };
        let inst = common::random_cos(&mut rng, n, m, 0, 15, 0);
        let r = pending(&mut rng, n);
        let d = deadline(&mut rng, &inst.batch_makespan(&r));
        let s = knapsack_muwp_fixed_m(&inst, &r, &d, &eps).unwrap();
        let (_, best) = brute_mswp(&inst, &r, &d).unwrap();
        assert!(s.selected_weight(inst.weights()) >= best, "seed {seed}");
        let cap = &d * (int(1) + &eps);
        assert!(
            inst.loads(&s.selected).iter().all(|l| *l <= cap),
            "seed {seed}"
        );
    }
}

#[test]
fn cluster_rounding_guarantees() {
    for seed in 0..150u64 {
        let mut rng = common::rng(5000 + seed);
        let n = rng.gen_range(1..=8);
        let inst = common::random_cluster(&mut rng, n, 3, 4, 3, 0);
        let r = pending(&mut rng, n);
        let d = int(rng.gen_range(0..=40));
        let s = lp_round_muwp_cluster(&inst, &r, &d).unwrap();
        let lp = s.lp_value.clone().unwrap();
        assert!(s.unscheduled_weight <= int(2) * &lp, "seed {seed}");
        let sched = list_schedule_cluster(&inst, &s.selected, &Rational::zero(), false);
        assert!(sched.makespan() <= int(4) * &d, "seed {seed}");
        // at most 12 tasks per cluster for the oracle
        if n <= 4 {
            let opt = weight(&Instance::Cluster(inst.clone()), &r) - cluster_best(&inst, &r, &d);
            assert!(lp <= opt);
        }
    }
}

fn small_cos() -> impl Strategy<Value = CosInstance> {
    (1usize..=8, 1usize..=3).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(0i64..=9, n), m),
            prop::collection::vec(0i64..=5, n),
        )
            .prop_map(|(p, w)| {
                let rows: Vec<&[i64]> = p.iter().map(Vec::as_slice).collect();
                CosInstance::from_ints(&rows, &w).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn exact_is_monotone_in_the_deadline(inst in small_cos(), d in 0i64..=30) {
        let all: Vec<usize> = (0..inst.n()).collect();
        let inst = Instance::Cos(inst);
        let a = exact_muwp(&inst, &all, &int(d)).unwrap();
        let b = exact_muwp(&inst, &all, &int(d + 1)).unwrap();
        prop_assert!(b.unscheduled_weight <= a.unscheduled_weight);
    }

    #[test]
    fn every_solver_is_within_beta_of_exact(inst in small_cos(), d in 0i64..=25) {
        let all: Vec<usize> = (0..inst.n()).collect();
        let view = Instance::Cos(inst.clone());
        let opt = exact_muwp(&view, &all, &int(d)).unwrap().unscheduled_weight;
        for solver in [MuwpSolver::Exact, MuwpSolver::Lp2, MuwpSolver::Knap { eps: ratio(1, 4) }] {
            let s = solver.solve(&view, &all, &int(d)).unwrap();
            prop_assert!(s.unscheduled_weight <= &s.beta * &opt);
            prop_assert!(inst.batch_makespan(&s.selected) <= &s.alpha * int(d));
            prop_assert_eq!((s.alpha.clone(), s.beta.clone()), solver.guarantee(view.model()));
        }
    }

    #[test]
    fn pending_order_does_not_matter(inst in small_cos(), d in 0i64..=25, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let mut all: Vec<usize> = (0..inst.n()).collect();
        let view = Instance::Cos(inst);
        let a = exact_muwp(&view, &all, &int(d)).unwrap();
        all.shuffle(&mut rng);
        prop_assert_eq!(a, exact_muwp(&view, &all, &int(d)).unwrap());
    }
}

#[test]
fn coflow_reduction_is_used_by_every_coflow_solver() {
    let mut rng = common::rng(77);
    let flow = common::random_coflow(&mut rng, 6, 2, 4, 0);
    let cos = coflow_to_cos(&flow);
    let inst = Instance::Coflow(flow);
    let all: Vec<usize> = (0..6).collect();
    let d = cos.batch_makespan(&all) / int(2);
    let s = MuwpSolver::Knap { eps: ratio(1, 2) }
        .solve(&inst, &all, &d)
        .unwrap();
    assert_eq!(
        s,
        knapsack_muwp_fixed_m(&cos, &all, &d, &ratio(1, 2)).unwrap()
    );
}

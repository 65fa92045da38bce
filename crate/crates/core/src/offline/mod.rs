//! Within-interval schedulers. They ignore release times and start every job
//! at or after a given offset.

mod cluster;
mod dp;
mod greedy;

use std::fmt;
use std::str::FromStr;

use num::Zero;

use crate::error::Result;
use crate::model::{
    coflow_to_cos, int, CoflowInstance, CosInstance, Instance, Model, Rational, Schedule,
};

pub use cluster::{cluster_cos_view, list_schedule_cluster, offline_cluster_schedule};
pub use dp::{dp_optimal_cos, DP_CAP};
pub use greedy::greedy_2approx_cos;

/// An ordering of a job set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Self {
        Permutation(order)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// True if this orders exactly the jobs in `jobs`.
    pub fn covers(&self, jobs: &[usize]) -> bool {
        let mut a = self.0.clone();
        let mut b = jobs.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

/// Permutation schedule: on every machine the components run in `order`
/// without unnecessary idle time, none before `offset` (nor before its
/// release when `releases` is set). Jobs with no work complete at their
/// earliest allowed start.
pub fn build_permutation_schedule(
    inst: &CosInstance,
    order: &[usize],
    offset: &Rational,
    releases: bool,
) -> Schedule {
    let mut sched = Schedule::new(inst.m());
    let mut free = vec![offset.clone(); inst.m()];
    for &j in order {
        let anchor = if releases && inst.releases()[j] > *offset {
            inst.releases()[j].clone()
        } else {
            offset.clone()
        };
        sched.mark(j, anchor.clone());
        for (i, f) in free.iter_mut().enumerate() {
            let p = inst.p(i, j);
            if p.is_zero() {
                continue;
            }
            let start = if *f > anchor {
                f.clone()
            } else {
                anchor.clone()
            };
            let end = &start + p;
            *f = end.clone();
            sched.push(i, j, start, end);
        }
    }
    sched
}

/// Fluid port schedule for coflows: each port sends its share of the chosen
/// coflows one after another in the order picked on the open shop reduction.
pub fn offline_coflow_schedule(
    inst: &CoflowInstance,
    jobs: &[usize],
    offset: &Rational,
    scheduler: OfflineScheduler,
) -> Result<Schedule> {
    let cos = coflow_to_cos(inst);
    let order = scheduler.order(&cos, jobs)?;
    Ok(build_permutation_schedule(
        &cos,
        order.as_slice(),
        offset,
        false,
    ))
}

/// Approximation factor an offline scheduler contributes to the online bound.
/// `proven` is false for stand-ins whose factor is the nominal target only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma {
    pub value: Rational,
    pub proven: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OfflineScheduler {
    /// Exact subset dynamic program on the open shop (view).
    Dp,
    /// Reverse greedy stand-in.
    Greedy,
}

impl OfflineScheduler {
    pub fn name(self) -> &'static str {
        match self {
            OfflineScheduler::Dp => "dp",
            OfflineScheduler::Greedy => "greedy",
        }
    }

    /// Job order on an open shop instance.
    pub fn order(self, inst: &CosInstance, jobs: &[usize]) -> Result<Permutation> {
        match self {
            OfflineScheduler::Dp => Ok(dp_optimal_cos(inst, jobs)?.0),
            OfflineScheduler::Greedy => Ok(greedy_2approx_cos(inst, jobs)),
        }
    }

    /// Schedules `jobs` of any environment from `offset`, ignoring releases.
    pub fn schedule(self, inst: &Instance, jobs: &[usize], offset: &Rational) -> Result<Schedule> {
        match inst {
            Instance::Cos(c) => {
                let order = self.order(c, jobs)?;
                Ok(build_permutation_schedule(
                    c,
                    order.as_slice(),
                    offset,
                    false,
                ))
            }
            Instance::Coflow(c) => offline_coflow_schedule(c, jobs, offset, self),
            Instance::Cluster(c) => offline_cluster_schedule(c, jobs, offset, self),
        }
    }

    /// Open shop: the DP is exact and the greedy targets 2. Coflow and cluster
    /// use the factors of the offline algorithms they stand in for (4 and 3).
    pub fn gamma(self, model: Model) -> Gamma {
        match (model, self) {
            (Model::Cos, OfflineScheduler::Dp) => Gamma {
                value: int(1),
                proven: true,
            },
            (Model::Cos, OfflineScheduler::Greedy) => Gamma {
                value: int(2),
                proven: false,
            },
            (Model::Coflow, _) => Gamma {
                value: int(4),
                proven: false,
            },
            (Model::Cluster, _) => Gamma {
                value: int(3),
                proven: false,
            },
        }
    }
}

impl fmt::Display for OfflineScheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OfflineScheduler {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dp" => Ok(OfflineScheduler::Dp),
            "greedy" => Ok(OfflineScheduler::Greedy),
            _ => Err(format!(
                "unknown offline scheduler `{s}` (expected dp or greedy)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    fn two_jobs() -> CosInstance {
        CosInstance::from_ints(&[&[1, 2], &[3, 1]], &[1, 2]).unwrap()
    }

    #[test]
    fn permutation_schedule_hand_simulation() {
        let inst = two_jobs();
        let s = build_permutation_schedule(&inst, &[1, 0], &int(0), false);
        assert_eq!(s.completion(1), Some(&int(2)));
        assert_eq!(s.completion(0), Some(&int(4)));
        validate(&Instance::Cos(inst), &s).unwrap();
    }

    #[test]
    fn empty_order_gives_empty_schedule() {
        let s = build_permutation_schedule(&two_jobs(), &[], &int(0), false);
        assert!(s.is_empty());
        assert!(s.units().iter().all(Vec::is_empty));
    }

    #[test]
    fn offset_translates() {
        let inst = two_jobs();
        let a = build_permutation_schedule(&inst, &[0, 1], &int(0), false);
        let b = build_permutation_schedule(&inst, &[0, 1], &int(7), false);
        for (ua, ub) in a.units().iter().zip(b.units()) {
            for (sa, sb) in ua.iter().zip(ub) {
                assert_eq!(&sa.start + int(7), sb.start);
                assert_eq!(&sa.end + int(7), sb.end);
            }
        }
        assert_eq!(b.makespan(), a.makespan() + int(7));
    }

    #[test]
    fn coflow_examples() {
        let one = CoflowInstance::new(
            2,
            vec![vec![vec![1, 2], vec![3, 4]]],
            vec![int(0)],
            vec![int(1)],
        )
        .unwrap();
        let s = offline_coflow_schedule(&one, &[0], &int(0), OfflineScheduler::Dp).unwrap();
        assert_eq!(s.completion(0), Some(&int(7)));

        // disjoint ports: 0 -> 0 and 1 -> 1
        let disjoint = CoflowInstance::new(
            2,
            vec![vec![vec![3, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 5]]],
            vec![int(0); 2],
            vec![int(1); 2],
        )
        .unwrap();
        let s =
            offline_coflow_schedule(&disjoint, &[0, 1], &int(0), OfflineScheduler::Greedy).unwrap();
        assert_eq!(
            (s.completion(0), s.completion(1)),
            (Some(&int(3)), Some(&int(5)))
        );

        let pair = CoflowInstance::new(
            1,
            vec![vec![vec![2]], vec![vec![1]]],
            vec![int(0); 2],
            vec![int(1), int(3)],
        )
        .unwrap();
        let s = offline_coflow_schedule(&pair, &[0, 1], &int(0), OfflineScheduler::Dp).unwrap();
        assert_eq!(
            (s.completion(1), s.completion(0)),
            (Some(&int(1)), Some(&int(3)))
        );
        assert_eq!(s.weighted_completion(pair.weights()), int(6));
        validate(&Instance::Coflow(pair), &s).unwrap();
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "dp".parse::<OfflineScheduler>().unwrap(),
            OfflineScheduler::Dp
        );
        assert!("lpt".parse::<OfflineScheduler>().is_err());
    }
}

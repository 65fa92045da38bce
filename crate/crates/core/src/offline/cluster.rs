use num::Zero;

use super::{OfflineScheduler, Permutation};
use crate::error::Result;
use crate::model::{cluster_aggregates, int, ClusterInstance, CosInstance, Rational, Schedule};

/// Greedy list scheduling: jobs in `order`, each job's tasks in listed order,
/// every task to the machine of its cluster that frees up first (lowest index
/// on ties). Nothing starts before `offset`, nor before the job's release when
/// `releases` is set.
///
/// Panics if a cluster's makespan exceeds `sum P / m_i + max B` (the list
/// scheduling bound); that bound only applies without releases.
pub fn list_schedule_cluster(
    inst: &ClusterInstance,
    order: &[usize],
    offset: &Rational,
    releases: bool,
) -> Schedule {
    let (offsets, total) = inst.machine_offsets();
    let anchor_of = |j: usize| {
        if releases && inst.releases()[j] > *offset {
            inst.releases()[j].clone()
        } else {
            offset.clone()
        }
    };
    let mut sched = Schedule::new(total);
    for &j in order {
        sched.mark(j, anchor_of(j));
    }
    for (i, &size) in inst.sizes().iter().enumerate() {
        let mut free = vec![offset.clone(); size];
        for &j in order {
            let anchor = anchor_of(j);
            for t in inst.tasks(j, i).iter().filter(|t| !t.is_zero()) {
                let q = (0..size).fold(0, |b, q| if free[q] < free[b] { q } else { b });
                let start = if free[q] > anchor {
                    free[q].clone()
                } else {
                    anchor.clone()
                };
                let end = &start + t;
                free[q] = end.clone();
                sched.push(offsets[i] + q, j, start, end);
            }
        }
        if !releases {
            let (spread, longest) =
                order
                    .iter()
                    .fold((Rational::zero(), Rational::zero()), |(s, b), &j| {
                        let (p, bj) = cluster_aggregates(inst, j, i);
                        (s + p, if bj > b { bj } else { b })
                    });
            let bound = spread / int(size as i64) + longest;
            let makespan = free.iter().max().cloned().unwrap_or_else(|| offset.clone()) - offset;
            assert!(
                makespan <= bound,
                "list scheduling exceeded its makespan bound on cluster {i}"
            );
        }
    }
    sched
}

/// Open shop surrogate of a cluster instance: one machine per cluster with
/// `p'_ij = max(P_ji / m_i, B_ji)`.
pub fn cluster_cos_view(inst: &ClusterInstance) -> CosInstance {
    let processing = (0..inst.m())
        .map(|i| {
            (0..inst.n())
                .map(|j| {
                    let (p, b) = cluster_aggregates(inst, j, i);
                    let spread = p / int(inst.sizes()[i] as i64);
                    if spread > b {
                        spread
                    } else {
                        b
                    }
                })
                .collect()
        })
        .collect();
    CosInstance::new(
        processing,
        inst.releases().to_vec(),
        inst.weights().to_vec(),
    )
    .expect("aggregates of a valid instance are valid")
}

/// Orders `jobs` on the open shop surrogate, then list schedules them from `offset`.
pub fn offline_cluster_schedule(
    inst: &ClusterInstance,
    jobs: &[usize],
    offset: &Rational,
    scheduler: OfflineScheduler,
) -> Result<Schedule> {
    let order: Permutation = scheduler.order(&cluster_cos_view(inst), jobs)?;
    Ok(list_schedule_cluster(inst, order.as_slice(), offset, false))
}

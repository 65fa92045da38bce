//! Brute-force references. These are deliberately naive and only share the
//! data model with the solvers they check.

use num::{BigInt, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{
    coflow_to_cos, denominator_lcm, ClusterInstance, CoflowInstance, CosInstance, Rational,
};

pub const PERM_CAP: usize = 8;
pub const MSWP_CAP: usize = 15;
pub const CLUSTER_TASK_CAP: usize = 12;
pub const LEMMA5_JOB_CAP: usize = 10;
pub const LEMMA5_PORT_CAP: usize = 4;

fn cap(what: &'static str, got: usize, cap: usize) -> Result<()> {
    if got > cap {
        Err(Error::CapExceeded { what, got, cap })
    } else {
        Ok(())
    }
}

/// Visits every permutation of `0..n` in lexicographic order.
fn each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        visit(&perm);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn perm_objective_cos(inst: &CosInstance, order: &[usize], with_releases: bool) -> Rational {
    let mut free = vec![Rational::zero(); inst.m()];
    let mut total = Rational::zero();
    for &j in order {
        let anchor = if with_releases {
            inst.releases()[j].clone()
        } else {
            Rational::zero()
        };
        let mut done = anchor.clone();
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
            *f = start + p;
            if *f > done {
                done = f.clone();
            }
        }
        total += &inst.weights()[j] * done;
    }
    total
}

/// The instance times a common denominator `l`, when all of it stays small
/// enough for `i128` objectives.
struct Scaled {
    l: BigInt,
    p: Vec<Vec<i128>>,
    r: Vec<i128>,
    w: Vec<i128>,
}

fn scaled(inst: &CosInstance) -> Option<Scaled> {
    let vals = inst
        .processing()
        .iter()
        .flatten()
        .chain(inst.releases())
        .chain(inst.weights());
    let l = denominator_lcm(vals);
    let conv = |v: &Rational| (v * &l).to_integer().to_i128().filter(|x| *x < 1 << 40);
    let p = inst
        .processing()
        .iter()
        .map(|row| row.iter().map(conv).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    let r = inst
        .releases()
        .iter()
        .map(conv)
        .collect::<Option<Vec<_>>>()?;
    let w = inst
        .weights()
        .iter()
        .map(conv)
        .collect::<Option<Vec<_>>>()?;
    Some(Scaled { l, p, r, w })
}

fn perm_objective_scaled(s: &Scaled, order: &[usize], with_releases: bool) -> i128 {
    let mut free = vec![0i128; s.p.len()];
    let mut total = 0;
    for &j in order {
        let anchor = if with_releases { s.r[j] } else { 0 };
        let mut done = anchor;
        for (i, f) in free.iter_mut().enumerate() {
            if s.p[i][j] == 0 {
                continue;
            }
            *f = (*f).max(anchor) + s.p[i][j];
            done = done.max(*f);
        }
        total += s.w[j] * done;
    }
    total
}

/// Best permutation schedule by exhaustive search. Without releases this is the
/// true optimum; with releases it is an upper bound on it.
pub fn brute_opt_perm_cos(
    inst: &CosInstance,
    with_releases: bool,
) -> Result<(Vec<usize>, Rational)> {
    cap("permutation oracle", inst.n(), PERM_CAP)?;
    if let Some(s) = scaled(inst) {
        let mut best: Option<(Vec<usize>, i128)> = None;
        each_permutation(inst.n(), |order| {
            let v = perm_objective_scaled(&s, order, with_releases);
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((order.to_vec(), v));
            }
        });
        let (order, v) = best.expect("at least the empty permutation");
        return Ok((order, Rational::new(BigInt::from(v), &s.l * &s.l)));
    }
    Ok(best_perm_rational(inst, with_releases))
}

fn best_perm_rational(inst: &CosInstance, with_releases: bool) -> (Vec<usize>, Rational) {
    let mut best: Option<(Vec<usize>, Rational)> = None;
    each_permutation(inst.n(), |order| {
        let v = perm_objective_cos(inst, order, with_releases);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((order.to_vec(), v));
        }
    });
    best.expect("at least the empty permutation")
}

/// Maximum total weight of a subset of `jobs` whose machine loads all fit in `deadline`.
pub fn brute_mswp(
    inst: &CosInstance,
    jobs: &[usize],
    deadline: &Rational,
) -> Result<(Vec<usize>, Rational)> {
    cap("scheduled weight oracle", jobs.len(), MSWP_CAP)?;
    let mut best = (Vec::new(), Rational::zero());
    for mask in 0u32..(1 << jobs.len()) {
        let chosen: Vec<usize> = (0..jobs.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| jobs[b])
            .collect();
        let fits = (0..inst.m()).all(|i| {
            let load: Rational = chosen.iter().map(|&j| inst.p(i, j)).sum();
            load <= *deadline
        });
        if !fits {
            continue;
        }
        let weight: Rational = chosen.iter().map(|&j| &inst.weights()[j]).sum();
        if weight > best.1 {
            best = (chosen, weight);
        }
    }
    Ok(best)
}

fn min_makespan(tasks: &[Rational], machines: usize) -> Rational {
    fn assign(
        k: usize,
        tasks: &[Rational],
        loads: &mut Vec<Rational>,
        used: usize,
        best: &mut Option<Rational>,
    ) {
        if k == tasks.len() {
            let mk = loads.iter().max().cloned().unwrap_or_else(Rational::zero);
            if best.as_ref().is_none_or(|b| mk < *b) {
                *best = Some(mk);
            }
            return;
        }
        // machines are interchangeable: only open one new machine per step
        let limit = (used + 1).min(loads.len());
        for q in 0..limit {
            loads[q] += &tasks[k];
            assign(k + 1, tasks, loads, used.max(q + 1), best);
            loads[q] -= &tasks[k];
        }
    }
    let mut loads = vec![Rational::zero(); machines];
    let mut best = None;
    assign(0, tasks, &mut loads, 0, &mut best);
    best.unwrap_or_else(Rational::zero)
}

/// Exact minimum makespan of `jobs` ignoring releases: every assignment of
/// tasks to machines is tried in each cluster.
pub fn brute_cluster_makespan(inst: &ClusterInstance, jobs: &[usize]) -> Result<Rational> {
    let mut worst = Rational::zero();
    for (i, &machines) in inst.sizes().iter().enumerate() {
        let tasks: Vec<Rational> = jobs
            .iter()
            .flat_map(|&j| inst.tasks(j, i).iter().filter(|t| !t.is_zero()).cloned())
            .collect();
        cap(
            "cluster makespan oracle tasks",
            tasks.len(),
            CLUSTER_TASK_CAP,
        )?;
        let mk = min_makespan(&tasks, machines);
        if mk > worst {
            worst = mk;
        }
    }
    Ok(worst)
}

fn perm_objective_cluster(
    inst: &ClusterInstance,
    order: &[usize],
    with_releases: bool,
) -> Rational {
    let mut free: Vec<Vec<Rational>> = inst
        .sizes()
        .iter()
        .map(|&s| vec![Rational::zero(); s])
        .collect();
    let mut total = Rational::zero();
    for &j in order {
        let anchor = if with_releases {
            inst.releases()[j].clone()
        } else {
            Rational::zero()
        };
        let mut done = anchor.clone();
        for (i, machines) in free.iter_mut().enumerate() {
            for t in inst.tasks(j, i) {
                if t.is_zero() {
                    continue;
                }
                let q = (0..machines.len())
                    .min_by(|&a, &b| machines[a].cmp(&machines[b]))
                    .unwrap();
                let start = if machines[q] > anchor {
                    machines[q].clone()
                } else {
                    anchor.clone()
                };
                machines[q] = start + t;
                if machines[q] > done {
                    done = machines[q].clone();
                }
            }
        }
        total += &inst.weights()[j] * done;
    }
    total
}

/// Best job order for greedy list scheduling on every cluster, by exhaustive
/// search. Any such schedule is feasible, so the value bounds the optimum from above.
pub fn brute_opt_perm_cluster(
    inst: &ClusterInstance,
    with_releases: bool,
) -> Result<(Vec<usize>, Rational)> {
    cap("cluster permutation oracle", inst.n(), PERM_CAP)?;
    let mut best: Option<(Vec<usize>, Rational)> = None;
    each_permutation(inst.n(), |order| {
        let v = perm_objective_cluster(inst, order, with_releases);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((order.to_vec(), v));
        }
    });
    Ok(best.expect("at least the empty permutation"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma5Report {
    /// Optimal unscheduled weight on the switch, fluid port model.
    pub coflow_optimum: Rational,
    /// Optimal unscheduled weight on the reduced open shop instance.
    pub reduced_optimum: Rational,
    pub pass: bool,
}

/// Compares optimal unscheduled weight at `deadline` on a coflow instance
/// (subset feasible iff every port load fits) with that on its open shop
/// reduction; the reduction must never be worse.
pub fn lemma5_check(inst: &CoflowInstance, deadline: &Rational) -> Result<Lemma5Report> {
    cap("lemma 5 check coflows", inst.n(), LEMMA5_JOB_CAP)?;
    cap("lemma 5 check ports", inst.ports(), LEMMA5_PORT_CAP)?;
    let n = inst.n();
    let m = inst.ports();
    let total: Rational = inst.weights().iter().sum();

    let mut coflow_best = total.clone();
    for mask in 0u32..(1 << n) {
        let mut inputs = vec![0u64; m];
        let mut outputs = vec![0u64; m];
        for j in (0..n).filter(|j| mask >> j & 1 == 1) {
            for (i, row) in inst.demand(j).iter().enumerate() {
                for (o, &d) in row.iter().enumerate() {
                    inputs[i] += d;
                    outputs[o] += d;
                }
            }
        }
        let fits = inputs
            .iter()
            .chain(&outputs)
            .all(|&load| Rational::from_integer(load.into()) <= *deadline);
        if fits {
            let left: Rational = (0..n)
                .filter(|j| mask >> j & 1 == 0)
                .map(|j| &inst.weights()[j])
                .sum();
            if left < coflow_best {
                coflow_best = left;
            }
        }
    }

    let cos = coflow_to_cos(inst);
    let mut reduced_best = total;
    for mask in 0u32..(1 << n) {
        let chosen: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let fits = (0..cos.m())
            .all(|s| chosen.iter().map(|&j| cos.p(s, j)).sum::<Rational>() <= *deadline);
        if fits {
            let left: Rational = (0..n)
                .filter(|j| mask >> j & 1 == 0)
                .map(|j| &cos.weights()[j])
                .sum();
            if left < reduced_best {
                reduced_best = left;
            }
        }
    }

    Ok(Lemma5Report {
        pass: reduced_best <= coflow_best,
        coflow_optimum: coflow_best,
        reduced_optimum: reduced_best,
    })
}

use std::cmp::Ordering;
use std::ops::{AddAssign, SubAssign};

use num::{BigInt, One, ToPrimitive, Zero};

use super::MuwpSolution;
use crate::error::{Error, Result};
use crate::model::{
    cluster_aggregates, denominator_lcm, int, ClusterInstance, CosInstance, Instance, Rational,
};
use crate::oracle::brute_cluster_makespan;

pub const EXACT_CAP: usize = 20;

/// Set of pending positions encoded as a bitmask, with the quantities used to
/// rank candidates.
#[derive(Clone)]
struct Candidate<W> {
    mask: u32,
    weight: W,
}

fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask >> b & 1 == 1)
}

/// Heavier first, then more jobs, then the lexicographically smaller job list.
/// Pending jobs are sorted, so comparing position lists compares job lists.
fn better<W: Ord>(a: &Candidate<W>, b: &Candidate<W>) -> bool {
    match a.weight.cmp(&b.weight) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match a.mask.count_ones().cmp(&b.mask.count_ones()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => members(a.mask).lt(members(b.mask)),
        },
    }
}

/// Gray code walk over all subsets, keeping the best one whose loads all fit.
fn enumerate<T>(loads_of: &[Vec<T>], weights: &[T], cap: &T) -> u32
where
    T: Clone + Ord + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
{
    let k = weights.len();
    let m = loads_of.first().map_or(0, Vec::len);
    let mut loads = vec![T::zero(); m];
    let mut cur = Candidate {
        mask: 0u32,
        weight: T::zero(),
    };
    let mut best = cur.clone();
    for g in 1u32..(1 << k) {
        let b = g.trailing_zeros() as usize;
        cur.mask ^= 1 << b;
        if cur.mask >> b & 1 == 1 {
            cur.weight += &weights[b];
            loads
                .iter_mut()
                .zip(&loads_of[b])
                .for_each(|(l, p)| *l += p);
        } else {
            cur.weight -= &weights[b];
            loads
                .iter_mut()
                .zip(&loads_of[b])
                .for_each(|(l, p)| *l -= p);
        }
        if better(&cur, &best) && loads.iter().all(|l| l <= cap) {
            best = cur.clone();
        }
    }
    best.mask
}

fn exact_cos(inst: &CosInstance, pending: &[usize], deadline: &Rational) -> u32 {
    let p_scale = denominator_lcm(
        pending
            .iter()
            .flat_map(|&j| (0..inst.m()).map(move |i| inst.p(i, j)))
            .chain(std::iter::once(deadline)),
    );
    let w_scale = denominator_lcm(pending.iter().map(|&j| &inst.weights()[j]));
    let scale = |v: &Rational, s: &BigInt| (v * s).to_integer();
    let loads: Vec<Vec<BigInt>> = pending
        .iter()
        .map(|&j| {
            (0..inst.m())
                .map(|i| scale(inst.p(i, j), &p_scale))
                .collect()
        })
        .collect();
    let weights: Vec<BigInt> = pending
        .iter()
        .map(|&j| scale(&inst.weights()[j], &w_scale))
        .collect();
    let cap = scale(deadline, &p_scale);

    let small = BigInt::one() << 100;
    let total_load: BigInt = loads.iter().flatten().sum::<BigInt>() + &cap;
    let total_weight: BigInt = weights.iter().sum();
    if total_load < small && total_weight < small {
        let narrow = |v: &BigInt| v.to_i128().expect("checked above");
        let loads: Vec<Vec<i128>> = loads
            .iter()
            .map(|row| row.iter().map(narrow).collect())
            .collect();
        let weights: Vec<i128> = weights.iter().map(narrow).collect();
        enumerate(&loads, &weights, &narrow(&cap))
    } else {
        enumerate(&loads, &weights, &cap)
    }
}

/// Feasibility on clusters: cheap necessary and sufficient tests first, then
/// the exact assignment search.
fn cluster_fits(inst: &ClusterInstance, jobs: &[usize], deadline: &Rational) -> Result<bool> {
    let mut certain = true;
    for (i, &size) in inst.sizes().iter().enumerate() {
        let (spread, longest) =
            jobs.iter()
                .fold((Rational::zero(), Rational::zero()), |(s, b), &j| {
                    let (p, bj) = cluster_aggregates(inst, j, i);
                    (s + p, b.max(bj))
                });
        let spread = spread / int(size as i64);
        if spread > *deadline || longest > *deadline {
            return Ok(false);
        }
        certain &= spread + longest <= *deadline;
    }
    if certain {
        return Ok(true);
    }
    Ok(brute_cluster_makespan(inst, jobs)? <= *deadline)
}

fn exact_cluster(inst: &ClusterInstance, pending: &[usize], deadline: &Rational) -> Result<u32> {
    let k = pending.len();
    let weights: Vec<&Rational> = pending.iter().map(|&j| &inst.weights()[j]).collect();
    let mut cur = Candidate {
        mask: 0u32,
        weight: Rational::zero(),
    };
    let mut best = cur.clone();
    for g in 1u32..(1 << k) {
        let b = g.trailing_zeros() as usize;
        cur.mask ^= 1 << b;
        if cur.mask >> b & 1 == 1 {
            cur.weight += weights[b];
        } else {
            cur.weight -= weights[b];
        }
        if !better(&cur, &best) {
            continue;
        }
        let jobs: Vec<usize> = members(cur.mask).map(|q| pending[q]).collect();
        if cluster_fits(inst, &jobs, deadline)? {
            best = cur.clone();
        }
    }
    Ok(best.mask)
}

/// Optimal solution by trying every subset of `pending`. A subset is feasible
/// when its batch makespan (open shop, or the open shop reduction of a
/// coflow) is at most `deadline`, or for clusters when its exact minimum
/// makespan is. Among optimal subsets the one with more jobs wins, then the
/// lexicographically smallest.
pub fn exact_muwp(inst: &Instance, pending: &[usize], deadline: &Rational) -> Result<MuwpSolution> {
    if pending.len() > EXACT_CAP {
        return Err(Error::CapExceeded {
            what: "exact unscheduled weight enumeration",
            got: pending.len(),
            cap: EXACT_CAP,
        });
    }
    let mut pending = pending.to_vec();
    pending.sort_unstable();
    pending.dedup();
    let (mask, alpha) = match inst {
        Instance::Cluster(c) => (exact_cluster(c, &pending, deadline)?, int(2)),
        _ => (
            exact_cos(&inst.cos_view().expect("not a cluster"), &pending, deadline),
            Rational::one(),
        ),
    };
    let selected = members(mask).map(|q| pending[q]).collect();
    Ok(MuwpSolution::new(
        inst.weights(),
        &pending,
        selected,
        alpha,
        Rational::one(),
    ))
}

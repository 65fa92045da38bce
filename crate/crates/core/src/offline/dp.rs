//! Exact subset dynamic program for concurrent open shop without release times.
//!
//! `C(S, j)`, the best weighted completion time of `S` with `j` finishing last,
//! satisfies `C(S, j) = min_i C(S \ {j}, i) + w_j * makespan(S)`, because the
//! last job of a permutation schedule completes exactly at the batch makespan.
//! The inner minimum only depends on `S \ {j}`, so the table keeps
//! `best(S) = min_j C(S, j)` per bitmask together with the minimizing last job.

use std::ops::{Add, Mul};

use num::{BigInt, One, ToPrimitive, Zero};

use super::Permutation;
use crate::error::{Error, Result};
use crate::model::{denominator_lcm, CosInstance, Rational};

pub const DP_CAP: usize = 20;

struct Table<T> {
    best: Vec<T>,
    last: Vec<u8>,
}

/// Masks of `k` bits with exactly `t` set, ascending (Gosper's hack).
fn masks_with_popcount(k: usize, t: usize) -> impl Iterator<Item = usize> {
    let limit = 1usize << k;
    let mut next = if t == 0 { 0 } else { (1usize << t) - 1 };
    let mut done = t > k;
    std::iter::from_fn(move || {
        if done || next >= limit {
            return None;
        }
        let cur = next;
        if t == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            next = (((r ^ cur) >> 2) / c) | r;
        }
        Some(cur)
    })
}

fn fill<T>(processing: &[Vec<T>], weights: &[T]) -> Table<T>
where
    T: Clone + Ord + Zero + Add<Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    let k = weights.len();
    let size = 1usize << k;
    let mut best = vec![T::zero(); size];
    let mut last = vec![0u8; size];
    for t in 1..=k {
        for mask in masks_with_popcount(k, t) {
            let makespan = processing
                .iter()
                .map(|row| {
                    (0..k)
                        .filter(|q| mask >> q & 1 == 1)
                        .fold(T::zero(), |acc, q| acc + row[q].clone())
                })
                .max()
                .unwrap_or_else(T::zero);
            let mut chosen: Option<(T, usize)> = None;
            for j in (0..k).filter(|j| mask >> j & 1 == 1) {
                let c = best[mask ^ (1 << j)].clone() + weights[j].clone() * &makespan;
                if chosen.as_ref().is_none_or(|(b, _)| c < *b) {
                    chosen = Some((c, j));
                }
            }
            let (b, j) = chosen.expect("non-empty subset");
            best[mask] = b;
            last[mask] = j as u8;
        }
    }
    Table { best, last }
}

fn reconstruct(last: &[u8], k: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(k);
    let mut mask = (1usize << k) - 1;
    while mask != 0 {
        let j = last[mask] as usize;
        order.push(j);
        mask ^= 1 << j;
    }
    order.reverse();
    order
}

/// Optimal order for `jobs` with all releases ignored, and its weighted
/// completion time measured from time zero.
pub fn dp_optimal_cos(inst: &CosInstance, jobs: &[usize]) -> Result<(Permutation, Rational)> {
    let k = jobs.len();
    if k > DP_CAP {
        return Err(Error::CapExceeded {
            what: "subset dynamic program",
            got: k,
            cap: DP_CAP,
        });
    }
    if k == 0 {
        return Ok((Permutation::new(Vec::new()), Rational::zero()));
    }

    // scale to integers so the table holds plain numbers
    let p_scale = denominator_lcm(
        inst.processing()
            .iter()
            .flat_map(|row| jobs.iter().map(move |&j| &row[j])),
    );
    let w_scale = denominator_lcm(jobs.iter().map(|&j| &inst.weights()[j]));
    let processing: Vec<Vec<BigInt>> = inst
        .processing()
        .iter()
        .map(|row| {
            jobs.iter()
                .map(|&j| (&row[j] * &p_scale).to_integer())
                .collect()
        })
        .collect();
    let weights: Vec<BigInt> = jobs
        .iter()
        .map(|&j| (&inst.weights()[j] * &w_scale).to_integer())
        .collect();

    let total_p: BigInt = processing.iter().flatten().sum();
    let total_w: BigInt = weights.iter().sum();
    let small = BigInt::one() << 60;
    let (local, scaled_best) = if total_p < small && total_w < small {
        let narrow = |v: &BigInt| v.to_i128().expect("checked above");
        let p: Vec<Vec<i128>> = processing
            .iter()
            .map(|row| row.iter().map(narrow).collect())
            .collect();
        let w: Vec<i128> = weights.iter().map(narrow).collect();
        let table = fill(&p, &w);
        (
            reconstruct(&table.last, k),
            BigInt::from(table.best[(1 << k) - 1]),
        )
    } else {
        let table = fill(&processing, &weights);
        (
            reconstruct(&table.last, k),
            table.best[(1 << k) - 1].clone(),
        )
    };

    let order = local.into_iter().map(|q| jobs[q]).collect();
    let value = Rational::new(scaled_best, p_scale * w_scale);
    Ok((Permutation::new(order), value))
}

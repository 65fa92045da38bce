use num::Zero;

use super::Permutation;
use crate::model::{CosInstance, Rational};

/// Reverse greedy order. The order is built from the back: take the machine
/// with the largest remaining load, put last the remaining job with the
/// smallest weight per unit of processing on that machine, and repeat.
/// Jobs with no work at all end up first. Ties go to the lowest index.
pub fn greedy_2approx_cos(inst: &CosInstance, jobs: &[usize]) -> Permutation {
    let mut remaining: Vec<usize> = jobs.to_vec();
    remaining.sort_unstable();
    let mut loads = inst.loads(&remaining);
    let mut tail = Vec::with_capacity(jobs.len());

    while !remaining.is_empty() {
        let (machine, load) =
            loads
                .iter()
                .enumerate()
                .fold((0, Rational::zero()), |(bi, bl), (i, l)| {
                    if *l > bl {
                        (i, l.clone())
                    } else {
                        (bi, bl)
                    }
                });
        if load.is_zero() {
            break;
        }
        let w = inst.weights();
        // w_a / p_a < w_b / p_b  <=>  w_a p_b < w_b p_a  for positive p
        let pick = remaining
            .iter()
            .enumerate()
            .filter(|(_, &j)| !inst.p(machine, j).is_zero())
            .fold(None::<(usize, usize)>, |best, (pos, &j)| match best {
                Some((_, b)) if &w[j] * inst.p(machine, b) >= &w[b] * inst.p(machine, j) => best,
                _ => Some((pos, j)),
            })
            .expect("positive load implies a job with work on the machine");
        let (pos, job) = pick;
        remaining.remove(pos);
        for (i, l) in loads.iter_mut().enumerate() {
            *l -= inst.p(i, job);
        }
        tail.push(job);
    }

    let mut order = remaining;
    order.extend(tail.into_iter().rev());
    Permutation::new(order)
}

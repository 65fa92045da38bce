//! Dual approximation through a scaled multidimensional knapsack.
//!
//! With `b = eps / (n + 1) * D` every size becomes `floor(p / b)` and every
//! capacity `ceil(D / b)`. Rounding sizes down and capacities up keeps every
//! feasible set feasible, so the scaled optimum is at least the true one,
//! and the rounding error over at most `n` items costs at most `eps * D`.

use std::ops::Add;

use num::{BigInt, One, ToPrimitive, Zero};

use super::MuwpSolution;
use crate::error::{Error, Result};
use crate::model::{denominator_lcm, int, CosInstance, Rational};

pub const KNAP_MACHINE_CAP: usize = 4;
pub const KNAP_CELL_LIMIT: u128 = 100_000_000;

struct Table {
    /// `take[t * cells + c]`: item `t` improved capacity vector `c`.
    take: Vec<u64>,
    cells: usize,
}

impl Table {
    fn set(&mut self, t: usize, c: usize) {
        let bit = t * self.cells + c;
        self.take[bit / 64] |= 1 << (bit % 64);
    }

    fn get(&self, t: usize, c: usize) -> bool {
        let bit = t * self.cells + c;
        self.take[bit / 64] >> (bit % 64) & 1 == 1
    }
}

/// 0/1 knapsack over capacity vectors `0..=cap` in every dimension. Returns
/// the chosen item positions.
fn knapsack<T>(sizes: &[Vec<usize>], weights: &[T], cap: usize, cells: usize) -> Vec<usize>
where
    T: Clone + Ord + Zero + Add<Output = T>,
{
    let dims = sizes.first().map_or(0, Vec::len);
    let n = weights.len();
    let strides: Vec<usize> = (0..dims).map(|d| (cap + 1).pow(d as u32)).collect();
    let mut value = vec![T::zero(); cells];
    let mut table = Table {
        take: vec![0; (n * cells).div_ceil(64)],
        cells,
    };

    for (t, (size, w)) in sizes.iter().zip(weights).enumerate() {
        let shift: usize = size.iter().zip(&strides).map(|(s, st)| s * st).sum();
        let mut coords = vec![cap; dims];
        for c in (0..cells).rev() {
            if coords.iter().zip(size).all(|(x, s)| x >= s) {
                let with = value[c - shift].clone() + w.clone();
                if with > value[c] {
                    value[c] = with;
                    table.set(t, c);
                }
            }
            // step the odometer down, first dimension fastest
            for x in coords.iter_mut() {
                if *x > 0 {
                    *x -= 1;
                    break;
                }
                *x = cap;
            }
        }
    }

    let mut c = cells - 1;
    let mut chosen = Vec::new();
    for t in (0..n).rev() {
        if table.get(t, c) {
            chosen.push(t);
            c -= sizes[t]
                .iter()
                .zip(&strides)
                .map(|(s, st)| s * st)
                .sum::<usize>();
        }
    }
    chosen.reverse();
    chosen
}

/// Every machine has capacity `deadline`. The selected set has weight at
/// least the best set that fits, and loads at most `(1 + eps) * deadline`.
pub fn knapsack_muwp_fixed_m(
    inst: &CosInstance,
    pending: &[usize],
    deadline: &Rational,
    eps: &Rational,
) -> Result<MuwpSolution> {
    if *eps <= Rational::zero() {
        return Err(Error::InvalidInstance(
            "knapsack eps must be positive".into(),
        ));
    }
    if inst.m() > KNAP_MACHINE_CAP {
        return Err(Error::CapExceeded {
            what: "knapsack machine count",
            got: inst.m(),
            cap: KNAP_MACHINE_CAP,
        });
    }
    let mut pending = pending.to_vec();
    pending.sort_unstable();
    pending.dedup();
    let alpha = Rational::one() + eps;
    let limit = deadline * &alpha;
    let fits = |s: &[usize]| inst.loads(s).iter().all(|l| *l <= limit);

    let mut selected = Vec::new();
    if deadline.is_zero() {
        selected = pending
            .iter()
            .copied()
            .filter(|&j| inst.max_component(j).is_zero())
            .collect();
    } else if !pending.is_empty() {
        let n = pending.len();
        let b = eps / int(n as i64 + 1) * deadline;
        let cap = (deadline / &b).ceil().to_integer();
        let scaled = |j: usize| -> Vec<BigInt> {
            (0..inst.m())
                .map(|i| (inst.p(i, j) / &b).floor().to_integer())
                .collect()
        };
        let items: Vec<(usize, Vec<BigInt>)> = pending
            .iter()
            .map(|&j| (j, scaled(j)))
            .filter(|(_, s)| s.iter().all(|x| *x <= cap))
            .collect();
        // dimensions where no candidate has scaled work are unconstrained
        let dims: Vec<usize> = (0..inst.m())
            .filter(|&i| items.iter().any(|(_, s)| !s[i].is_zero()))
            .collect();

        let per_dim = (&cap + BigInt::one()).pow(dims.len() as u32);
        let needed = per_dim.clone() * BigInt::from(items.len() as u64 + 1);
        let needed = needed.to_u128().unwrap_or(u128::MAX);
        if needed > KNAP_CELL_LIMIT {
            return Err(Error::TableTooLarge {
                cells: needed,
                limit: KNAP_CELL_LIMIT,
            });
        }
        let cap = cap.to_usize().expect("guarded");
        let cells = per_dim.to_usize().expect("guarded");
        let sizes: Vec<Vec<usize>> = items
            .iter()
            .map(|(_, s)| {
                dims.iter()
                    .map(|&i| s[i].to_usize().expect("at most cap"))
                    .collect()
            })
            .collect();

        let w_scale = denominator_lcm(items.iter().map(|(j, _)| &inst.weights()[*j]));
        let weights: Vec<BigInt> = items
            .iter()
            .map(|(j, _)| (&inst.weights()[*j] * &w_scale).to_integer())
            .collect();
        let chosen = if weights.iter().sum::<BigInt>() < BigInt::one() << 100 {
            let w: Vec<i128> = weights
                .iter()
                .map(|v| v.to_i128().expect("checked above"))
                .collect();
            knapsack(&sizes, &w, cap, cells)
        } else {
            knapsack(&sizes, &weights, cap, cells)
        };
        selected = chosen.into_iter().map(|t| items[t].0).collect();
        assert!(fits(&selected), "scaled knapsack exceeded (1 + eps) * D");
    }

    for &j in &pending {
        if inst.weights()[j].is_zero() && !selected.contains(&j) {
            selected.push(j);
            if !fits(&selected) {
                selected.pop();
            }
        }
    }
    Ok(MuwpSolution::new(
        inst.weights(),
        &pending,
        selected,
        alpha,
        Rational::one(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    #[test]
    fn scaled_example() {
        let inst = CosInstance::from_ints(&[&[6, 5, 5]], &[10, 6, 6]).unwrap();
        let s = knapsack_muwp_fixed_m(&inst, &[0, 1, 2], &int(10), &ratio(1, 5)).unwrap();
        assert_eq!(s.selected, vec![1, 2]);
        assert_eq!(s.selected_weight(inst.weights()), int(12));
        assert_eq!(s.alpha, ratio(6, 5));
    }

    #[test]
    fn huge_eps_still_respects_the_cap() {
        let inst = CosInstance::from_ints(&[&[6, 5, 5]], &[10, 6, 6]).unwrap();
        let eps = int(50);
        let s = knapsack_muwp_fixed_m(&inst, &[0, 1, 2], &int(10), &eps).unwrap();
        assert_eq!(s.selected, vec![0, 1, 2]);
        assert!(inst.loads(&s.selected)[0] <= int(10) * (int(1) + eps));
    }

    #[test]
    fn exact_fit_single_item() {
        let inst = CosInstance::from_ints(&[&[7], &[3]], &[2]).unwrap();
        for eps in [ratio(1, 100), ratio(1, 2), int(3)] {
            let s = knapsack_muwp_fixed_m(&inst, &[0], &int(7), &eps).unwrap();
            assert_eq!(s.selected, vec![0]);
        }
    }

    #[test]
    fn zero_deadline() {
        let inst = CosInstance::from_ints(&[&[0, 2]], &[1, 1]).unwrap();
        let s = knapsack_muwp_fixed_m(&inst, &[0, 1], &int(0), &ratio(1, 2)).unwrap();
        assert_eq!(s.selected, vec![0]);
    }

    #[test]
    fn guards() {
        let wide = CosInstance::from_ints(&[&[1], &[1], &[1], &[1], &[1]], &[1]).unwrap();
        assert!(matches!(
            knapsack_muwp_fixed_m(&wide, &[0], &int(1), &ratio(1, 2)),
            Err(Error::CapExceeded { .. })
        ));
        let inst = CosInstance::from_ints(&[&[1, 1], &[1, 1], &[1, 1]], &[1, 1]).unwrap();
        let err = knapsack_muwp_fixed_m(&inst, &[0, 1], &int(1), &ratio(1, 1000)).unwrap_err();
        assert!(matches!(err, Error::TableTooLarge { .. }));
        assert!(knapsack_muwp_fixed_m(&inst, &[0], &int(1), &int(0)).is_err());
    }

    #[test]
    fn two_dimensions() {
        // job 0 is heavy but blocks machine 1 for the others
        let inst = CosInstance::from_ints(&[&[1, 2, 2], &[4, 1, 1]], &[5, 3, 3]).unwrap();
        let s = knapsack_muwp_fixed_m(&inst, &[0, 1, 2], &int(4), &ratio(1, 10)).unwrap();
        assert_eq!(s.selected, vec![1, 2]);
    }
}

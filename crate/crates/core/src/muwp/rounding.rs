use num::{One, Zero};

use super::MuwpSolution;
use crate::error::{Error, Result};
use crate::lp::{solve, LpProblem, LpStatus, Sense};
use crate::model::{cluster_aggregates, int, ratio, ClusterInstance, CosInstance, Rational};

/// `min sum w_j (1 - x_j)` over `lower <= x <= upper` and the given rows.
fn relax(
    weights: Vec<Rational>,
    upper: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
    deadline: &Rational,
) -> Result<(Vec<Rational>, Rational)> {
    let total: Rational = weights.iter().sum();
    let cost = weights.into_iter().map(|w| -w).collect::<Vec<_>>();
    let lower = vec![Rational::zero(); cost.len()];
    let mut lp = LpProblem::new(Sense::Minimize, cost, lower, upper).with_offset(total);
    for row in rows.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())) {
        lp.add_row(row, deadline.clone());
    }
    let sol = solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(
            "relaxation reported infeasible although x = 0 is feasible".into(),
        ));
    }
    Ok((sol.x, sol.value))
}

/// Jobs with `x >= 1/2`, plus any zero weight pending jobs that keep `fits`.
fn round(
    pending: &[usize],
    x: &[Rational],
    weights: &[Rational],
    fits: impl Fn(&[usize]) -> bool,
) -> Vec<usize> {
    let half = ratio(1, 2);
    let mut selected: Vec<usize> = pending
        .iter()
        .zip(x)
        .filter(|(_, v)| **v >= half)
        .map(|(&j, _)| j)
        .collect();
    for &j in pending {
        if weights[j].is_zero() && !selected.contains(&j) {
            selected.push(j);
            if !fits(&selected) {
                selected.pop();
            }
        }
    }
    selected
}

fn sorted(pending: &[usize]) -> Vec<usize> {
    let mut p = pending.to_vec();
    p.sort_unstable();
    p.dedup();
    p
}

/// LP relaxation with one load row per machine, rounded at one half. The
/// selected set has batch makespan at most `2D` and unscheduled weight at
/// most twice the relaxation optimum.
pub fn lp_round_muwp_cos(
    inst: &CosInstance,
    pending: &[usize],
    deadline: &Rational,
) -> Result<MuwpSolution> {
    let pending = sorted(pending);
    let weights = pending.iter().map(|&j| inst.weights()[j].clone()).collect();
    let rows = (0..inst.m())
        .map(|i| pending.iter().map(|&j| inst.p(i, j).clone()).collect())
        .collect();
    let (x, value) = relax(
        weights,
        vec![Rational::one(); pending.len()],
        rows,
        deadline,
    )?;
    let limit = deadline * int(2);
    let selected = round(&pending, &x, inst.weights(), |s| {
        inst.batch_makespan(s) <= limit
    });
    let mut sol = MuwpSolution::new(inst.weights(), &pending, selected, int(2), int(2));
    sol.lp_value = Some(value);
    Ok(sol)
}

/// Per cluster `i`: `sum_j P_ji / m_i * x_j <= D` and `B_ji * x_j <= D` (the
/// latter as upper bounds on `x_j`). After rounding at one half every
/// cluster has spread and longest task at most `2D`, so list scheduling
/// finishes within `4D`.
pub fn lp_round_muwp_cluster(
    inst: &ClusterInstance,
    pending: &[usize],
    deadline: &Rational,
) -> Result<MuwpSolution> {
    let pending = sorted(pending);
    let weights = pending.iter().map(|&j| inst.weights()[j].clone()).collect();
    let upper = pending
        .iter()
        .map(|&j| {
            (0..inst.m())
                .map(|i| cluster_aggregates(inst, j, i).1)
                .filter(|b| !b.is_zero())
                .map(|b| deadline / b)
                .fold(Rational::one(), |u, v| u.min(v))
        })
        .collect();
    let rows = (0..inst.m())
        .map(|i| {
            let size = int(inst.sizes()[i] as i64);
            pending
                .iter()
                .map(|&j| cluster_aggregates(inst, j, i).0 / &size)
                .collect()
        })
        .collect();
    let (x, value) = relax(weights, upper, rows, deadline)?;
    let limit = deadline * int(2);
    let fits = |s: &[usize]| {
        (0..inst.m()).all(|i| {
            let (spread, longest) =
                s.iter()
                    .fold((Rational::zero(), Rational::zero()), |(a, b), &j| {
                        let (p, bj) = cluster_aggregates(inst, j, i);
                        (a + p, b.max(bj))
                    });
            spread / int(inst.sizes()[i] as i64) <= limit && longest <= limit
        })
    };
    let selected = round(&pending, &x, inst.weights(), fits);
    let mut sol = MuwpSolution::new(inst.weights(), &pending, selected, int(4), int(2));
    sol.lp_value = Some(value);
    Ok(sol)
}

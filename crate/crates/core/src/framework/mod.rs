//! Online minimization framework. At every grid point `tau_k` the pending
//! jobs `R(tau_k)` (released by `tau_k`, not yet scheduled) are handed to a
//! MUWP solver with deadline `D = tau_{k+1} - tau_k`, and the chosen set is
//! scheduled by an offline scheduler inside `(alpha tau_k, alpha tau_{k+1}]`.

mod grid;

use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::model::{objective, to_f64, Instance, Rational, Schedule};
use crate::muwp::MuwpSolver;
use crate::offline::{Gamma, OfflineScheduler};

pub use grid::{
    competitive_factor, deterministic_grid, eta_draw, interval_start_of, inv_ln2_upper,
    randomized_grid, GridKind, IntervalSequence,
};

/// Rounds before a run is declared stuck. Interval lengths double, so any
/// instance finishes long before this.
pub const ROUND_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundLog {
    pub k: i64,
    pub tau: Rational,
    pub deadline: Rational,
    pub pending: Vec<usize>,
    pub selected: Vec<usize>,
    /// `alpha * tau`.
    pub offset: Rational,
    /// Length of the round's schedule measured from `offset`.
    pub makespan: Rational,
    pub unscheduled_weight: Rational,
    pub lp_value: Option<Rational>,
}

impl fmt::Display for RoundLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "round {} {} {} {} {} {} {}",
            self.k,
            to_f64(&self.tau),
            to_f64(&self.deadline),
            self.pending.len(),
            self.selected.len(),
            to_f64(&self.offset),
            to_f64(&self.makespan)
        )
    }
}

#[derive(Debug, Clone)]
pub struct OnlineResult {
    pub schedule: Schedule,
    pub objective: Rational,
    pub completion: Vec<Rational>,
    /// `C_j - alpha tau_k` for the round `k` that scheduled `j`.
    pub delta: Vec<Rational>,
    pub round_of: Vec<i64>,
    pub rounds: Vec<RoundLog>,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Gamma,
    pub total_weight: Rational,
    pub grid: IntervalSequence,
}

pub fn run_online(
    inst: &Instance,
    solver: &MuwpSolver,
    scheduler: OfflineScheduler,
    grid: &IntervalSequence,
) -> Result<OnlineResult> {
    inst.check_online()?;
    let model = inst.model();
    if !solver.supports(model) {
        return Err(Error::Unsupported {
            solver: solver.name(),
            model: model.name(),
        });
    }
    let (alpha, beta) = solver.guarantee(model);
    let n = inst.n();
    let mut result = OnlineResult {
        schedule: Schedule::new(inst.unit_count()),
        objective: Rational::zero(),
        completion: vec![Rational::zero(); n],
        delta: vec![Rational::zero(); n],
        round_of: vec![0; n],
        rounds: Vec::new(),
        alpha: alpha.clone(),
        beta,
        gamma: scheduler.gamma(model),
        total_weight: inst.total_weight(),
        grid: grid.clone(),
    };
    if n == 0 {
        return Ok(result);
    }

    let releases = inst.releases();
    let earliest = releases.iter().min().expect("n > 0").clone();
    let mut done = vec![false; n];
    let mut left = n;
    let mut k = grid.first_round_at_or_after(&earliest);
    while left > 0 {
        if result.rounds.len() >= ROUND_LIMIT {
            return Err(Error::NoProgress(ROUND_LIMIT));
        }
        let tau = grid.tau(k);
        let deadline = grid.deadline(k);
        let pending: Vec<usize> = (0..n).filter(|&j| !done[j] && releases[j] <= tau).collect();
        let sol = solver.solve(inst, &pending, &deadline)?;
        let offset = &alpha * &tau;
        let sched = scheduler.schedule(inst, &sol.selected, &offset)?;
        let makespan = if sol.selected.is_empty() {
            Rational::zero()
        } else {
            sched.makespan() - &offset
        };
        let limit = &alpha * &deadline;
        if makespan > limit {
            return Err(Error::IntervalOverflow {
                round: k,
                makespan: crate::model::fmt_rational(&makespan),
                limit: crate::model::fmt_rational(&limit),
            });
        }
        for &j in &sol.selected {
            let c = sched
                .completion(j)
                .expect("scheduler covers its jobs")
                .clone();
            result.delta[j] = &c - &offset;
            result.completion[j] = c;
            result.round_of[j] = k;
            done[j] = true;
            left -= 1;
        }
        result.schedule.absorb(sched);
        result.rounds.push(RoundLog {
            k,
            tau,
            deadline,
            pending,
            selected: sol.selected,
            offset,
            makespan,
            unscheduled_weight: sol.unscheduled_weight,
            lp_value: sol.lp_value,
        });
        k += 1;
    }
    result.objective = objective(inst, &result.schedule)?;
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub objective: Rational,
    pub factor: Rational,
    /// `factor * opt_upper + alpha W`.
    pub bound: Rational,
    pub pass: bool,
}

/// Compares the objective with `(2 alpha beta + gamma) OPT + alpha W`, or with
/// the expectation bound `(alpha beta / ln 2 + gamma) OPT + alpha W` for a
/// randomized grid. `opt_upper` must be at least the optimum. A single
/// randomized run need not meet its expectation bound.
pub fn theorem_bound(result: &OnlineResult, opt_upper: &Rational) -> BoundReport {
    let factor = competitive_factor(
        result.grid.kind(),
        &result.alpha,
        &result.beta,
        &result.gamma.value,
    );
    let bound = &factor * opt_upper + &result.alpha * &result.total_weight;
    BoundReport {
        objective: result.objective.clone(),
        pass: result.objective <= bound,
        factor,
        bound,
    }
}

/// Mean of `interval_start_of(c)` over seeded randomized grids, in floating
/// point. Its expectation is `c / (2 ln 2)`.
pub fn mean_interval_start(c: f64, seeds: std::ops::Range<u64>) -> f64 {
    assert!(c > 0.0, "interval start needs a positive time");
    let count = (seeds.end - seeds.start) as f64;
    let total: f64 = seeds
        .map(|s| {
            let eta = eta_draw(s);
            let mut k = 0;
            while eta * 2f64.powi(k) < c {
                k += 1;
            }
            if k == 0 {
                0.0
            } else {
                eta * 2f64.powi(k - 1)
            }
        })
        .sum();
    total / count
}

impl OnlineResult {
    /// Jobs scheduled in round `k`.
    pub fn round_jobs(&self, k: i64) -> Vec<usize> {
        (0..self.round_of.len())
            .filter(|&j| self.round_of[j] == k)
            .collect()
    }

    /// `sum_j w_j delta_j`.
    pub fn weighted_delta(&self, weights: &[Rational]) -> Rational {
        self.delta.iter().zip(weights).map(|(d, w)| d * w).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.completion.is_empty()
    }
}

//! Minimum unscheduled weight: given pending jobs `R` and a deadline `D`,
//! choose jobs to finish by `D` so that the weight left out is small.
//!
//! An `(alpha, beta)` solver returns a set that the paired offline scheduler
//! completes within `alpha * D` and whose unscheduled weight is at most `beta`
//! times the optimum.

mod exact;
mod knapsack;
mod rounding;

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{fmt_rational, int, parse_rational, Instance, Model, Rational};

pub use exact::{exact_muwp, EXACT_CAP};
pub use knapsack::{knapsack_muwp_fixed_m, KNAP_CELL_LIMIT, KNAP_MACHINE_CAP};
pub use rounding::{lp_round_muwp_cluster, lp_round_muwp_cos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuwpSolution {
    /// Selected jobs, ascending.
    pub selected: Vec<usize>,
    pub alpha: Rational,
    pub beta: Rational,
    pub unscheduled_weight: Rational,
    /// Optimal value of the relaxation, for the rounding solvers.
    pub lp_value: Option<Rational>,
}

impl MuwpSolution {
    fn new(
        weights: &[Rational],
        pending: &[usize],
        mut selected: Vec<usize>,
        alpha: Rational,
        beta: Rational,
    ) -> Self {
        selected.sort_unstable();
        selected.dedup();
        let unscheduled_weight = pending
            .iter()
            .filter(|j| selected.binary_search(j).is_err())
            .map(|&j| &weights[j])
            .sum();
        MuwpSolution {
            selected,
            alpha,
            beta,
            unscheduled_weight,
            lp_value: None,
        }
    }

    pub fn selected_weight(&self, weights: &[Rational]) -> Rational {
        self.selected.iter().map(|&j| &weights[j]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MuwpSolver {
    /// Subset enumeration.
    Exact,
    /// LP relaxation rounded at one half (open shop and coflow).
    Lp2,
    /// Scaled multidimensional knapsack program.
    Knap { eps: Rational },
    /// LP relaxation for clusters rounded at one half.
    ClusterLp,
}

impl MuwpSolver {
    pub fn name(&self) -> &'static str {
        match self {
            MuwpSolver::Exact => "exact",
            MuwpSolver::Lp2 => "lp2",
            MuwpSolver::Knap { .. } => "knap",
            MuwpSolver::ClusterLp => "cluster-lp",
        }
    }

    pub fn supports(&self, model: Model) -> bool {
        match self {
            MuwpSolver::Exact => true,
            MuwpSolver::Lp2 | MuwpSolver::Knap { .. } => model != Model::Cluster,
            MuwpSolver::ClusterLp => model == Model::Cluster,
        }
    }

    /// `(alpha, beta)` declared for `model`. The exact solver on clusters only
    /// certifies `2D`, since the paired list scheduler is not optimal.
    pub fn guarantee(&self, model: Model) -> (Rational, Rational) {
        match self {
            MuwpSolver::Exact if model == Model::Cluster => (int(2), Rational::one()),
            MuwpSolver::Exact => (Rational::one(), Rational::one()),
            MuwpSolver::Lp2 => (int(2), int(2)),
            MuwpSolver::Knap { eps } => (Rational::one() + eps, Rational::one()),
            MuwpSolver::ClusterLp => (int(4), int(2)),
        }
    }

    pub fn solve(
        &self,
        inst: &Instance,
        pending: &[usize],
        deadline: &Rational,
    ) -> Result<MuwpSolution> {
        if !self.supports(inst.model()) {
            return Err(Error::Unsupported {
                solver: self.name(),
                model: inst.model().name(),
            });
        }
        if deadline.is_negative() {
            return Err(Error::InvalidInstance(format!(
                "negative deadline {}",
                fmt_rational(deadline)
            )));
        }
        match (self, inst) {
            (MuwpSolver::Exact, _) => exact_muwp(inst, pending, deadline),
            (MuwpSolver::Lp2, _) => {
                lp_round_muwp_cos(&inst.cos_view().expect("checked above"), pending, deadline)
            }
            (MuwpSolver::Knap { eps }, _) => knapsack_muwp_fixed_m(
                &inst.cos_view().expect("checked above"),
                pending,
                deadline,
                eps,
            ),
            (MuwpSolver::ClusterLp, Instance::Cluster(c)) => {
                lp_round_muwp_cluster(c, pending, deadline)
            }
            (MuwpSolver::ClusterLp, _) => unreachable!("checked above"),
        }
    }
}

impl fmt::Display for MuwpSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MuwpSolver {
    type Err = String;

    /// `knap` takes `knap` (eps 1/10) or `knap:<eps>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(MuwpSolver::Exact),
            "lp2" => Ok(MuwpSolver::Lp2),
            "cluster-lp" => Ok(MuwpSolver::ClusterLp),
            "knap" => Ok(MuwpSolver::Knap {
                eps: crate::model::ratio(1, 10),
            }),
            _ => match s.strip_prefix("knap:") {
                Some(e) => {
                    let eps = parse_rational(e)?;
                    if eps <= Rational::zero() {
                        return Err(format!("knapsack eps must be positive, got {e}"));
                    }
                    Ok(MuwpSolver::Knap { eps })
                }
                None => Err(format!(
                    "unknown muwp solver `{s}` (expected exact, lp2, knap or cluster-lp)"
                )),
            },
        }
    }
}

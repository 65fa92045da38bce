use std::io::{Read, Write};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use num::Zero;
use owct_core::framework::{
    competitive_factor, randomized_grid, run_online, GridKind, IntervalSequence,
};
use owct_core::model::{to_f64, Instance, Model, Rational};
use owct_core::muwp::{MuwpSolver, EXACT_CAP, KNAP_MACHINE_CAP};
use owct_core::offline::{build_permutation_schedule, dp_optimal_cos, OfflineScheduler, DP_CAP};
use owct_core::oracle::{brute_opt_perm_cluster, brute_opt_perm_cos, PERM_CAP};
use rayon::prelude::*;
use serde::Deserialize;

pub const HEADER: [&str; 15] = [
    "instance_id",
    "model",
    "muwp",
    "offline",
    "grid",
    "seed",
    "eta",
    "objective",
    "opt_upper",
    "bound",
    "bound_pass",
    "empirical_ratio",
    "runtime_ms",
    "lb_ratio",
    "factor",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub model: Model,
    pub muwp: MuwpSolver,
    pub offline: OfflineScheduler,
    pub grid: GridKind,
    /// Randomized grids only; each trial draws its own `eta`.
    pub trials: u64,
    pub seed: u64,
    /// Largest instance handed to an optimum oracle.
    pub cap_n: usize,
    /// Fill `runtime_ms`. Without it the output is byte-for-byte reproducible.
    pub timing: bool,
    /// Keep the per-round log lines in each row.
    pub log_rounds: bool,
}

impl RunConfig {
    pub fn new(model: Model, muwp: MuwpSolver, offline: OfflineScheduler, grid: GridKind) -> Self {
        RunConfig {
            model,
            muwp,
            offline,
            grid,
            trials: 1,
            seed: 0,
            cap_n: PERM_CAP,
            timing: true,
            log_rounds: false,
        }
    }

    /// Solver, scheduler and instance must fit together.
    pub fn check(&self, id: &str, inst: &Instance) -> Result<()> {
        if inst.model() != self.model {
            bail!(
                "instance {id} is {}, run is configured for {}",
                inst.model(),
                self.model
            );
        }
        if !self.muwp.supports(self.model) {
            bail!("{} cannot be used with the {} model", self.muwp, self.model);
        }
        if let (MuwpSolver::Knap { .. }, Some(cos)) = (&self.muwp, inst.cos_view()) {
            if cos.m() > KNAP_MACHINE_CAP {
                bail!("instance {id}: knap supports at most {KNAP_MACHINE_CAP} machines, open shop view has {}", cos.m());
            }
        }
        if self.muwp == MuwpSolver::Exact && inst.n() > EXACT_CAP {
            bail!("instance {id}: exact supports at most {EXACT_CAP} jobs");
        }
        if self.offline == OfflineScheduler::Dp && inst.n() > DP_CAP {
            bail!("instance {id}: dp supports at most {DP_CAP} jobs");
        }
        if self.grid == GridKind::Randomized && self.trials == 0 {
            bail!("randomized runs need at least one trial");
        }
        inst.check_online()
            .with_context(|| format!("instance {id}"))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub instance_id: String,
    pub model: Model,
    pub muwp: String,
    pub offline: String,
    pub grid: GridKind,
    pub seed: u64,
    pub eta: Option<f64>,
    pub objective: Rational,
    pub opt_upper: Option<Rational>,
    pub bound: Option<Rational>,
    pub bound_pass: Option<bool>,
    pub runtime_ms: Option<f64>,
    pub lower_bound: Rational,
    pub factor: Rational,
    pub rounds: Vec<String>,
}

impl Row {
    pub fn empirical_ratio(&self) -> Option<f64> {
        self.opt_upper
            .as_ref()
            .filter(|o| !o.is_zero())
            .map(|o| to_f64(&(&self.objective / o)))
    }

    /// Ratio against the trivial lower bound, only when no optimum is known.
    pub fn lb_ratio(&self) -> Option<f64> {
        if self.opt_upper.is_some() || self.lower_bound.is_zero() {
            None
        } else {
            Some(to_f64(&(&self.objective / &self.lower_bound)))
        }
    }
}

/// An upper bound on the optimum when an oracle can afford it: the exact
/// DP without releases, the best permutation schedule with releases, and the
/// best list-scheduled job order for clusters.
pub fn opt_upper(inst: &Instance, cap_n: usize) -> Option<Rational> {
    let n = inst.n();
    let released = inst.releases().iter().any(|r| !r.is_zero());
    match inst {
        Instance::Cluster(c) if n <= cap_n.min(PERM_CAP) => {
            brute_opt_perm_cluster(c, true).ok().map(|v| v.1)
        }
        Instance::Cluster(_) => None,
        _ => {
            let cos = inst.cos_view().expect("not a cluster");
            if !released && n <= cap_n.min(DP_CAP) {
                let all: Vec<usize> = (0..n).collect();
                dp_optimal_cos(&cos, &all).ok().map(|v| v.1)
            } else if n <= cap_n.min(PERM_CAP) {
                brute_opt_perm_cos(&cos, true).ok().map(|v| v.1)
            } else {
                None
            }
        }
    }
}

/// Whether the scheduler's factor can be relied on for this instance: proven
/// factors always, the open shop greedy when it is within 2 of the DP.
fn gamma_holds(inst: &Instance, offline: OfflineScheduler) -> Option<bool> {
    let gamma = offline.gamma(inst.model());
    if gamma.proven || inst.model() != Model::Cos {
        return Some(true);
    }
    let cos = inst.cos_view().expect("open shop");
    let all: Vec<usize> = (0..inst.n()).collect();
    if all.len() > DP_CAP {
        return None;
    }
    let (_, best) = dp_optimal_cos(&cos, &all).ok()?;
    let order = offline.order(&cos, &all).ok()?;
    let greedy = build_permutation_schedule(&cos, order.as_slice(), &Rational::zero(), false);
    Some(greedy.weighted_completion(cos.weights()) <= gamma.value * best)
}

struct Trial {
    inst: usize,
    seed: u64,
    grid: IntervalSequence,
}

/// One row per instance (deterministic grid) or per instance and trial
/// (randomized grid, seeds `seed`, `seed + 1`, ...). Rows come out in input
/// order regardless of how they were computed.
pub fn run(config: &RunConfig, instances: &[(String, Instance)]) -> Result<Vec<Row>> {
    for (id, inst) in instances {
        config.check(id, inst)?;
    }
    let trials: Vec<Trial> = (0..instances.len())
        .flat_map(|i| match config.grid {
            GridKind::Deterministic => vec![Trial {
                inst: i,
                seed: config.seed,
                grid: IntervalSequence::deterministic(),
            }],
            GridKind::Randomized => (0..config.trials)
                .map(|t| Trial {
                    inst: i,
                    seed: config.seed + t,
                    grid: randomized_grid(config.seed + t),
                })
                .collect(),
        })
        .collect();

    let per_instance: Vec<(Option<Rational>, Option<bool>)> = instances
        .par_iter()
        .map(|(_, inst)| {
            (
                opt_upper(inst, config.cap_n),
                gamma_holds(inst, config.offline),
            )
        })
        .collect();

    let outcomes: Vec<Outcome> = trials
        .par_iter()
        .map(|t| {
            let (id, inst) = &instances[t.inst];
            let start = Instant::now();
            let r = run_online(inst, &config.muwp, config.offline, &t.grid)
                .with_context(|| format!("instance {id}"))?;
            let ms = start.elapsed().as_secs_f64() * 1000.0;
            Ok(Outcome {
                factor: competitive_factor(config.grid, &r.alpha, &r.beta, &r.gamma.value),
                additive: &r.alpha * &r.total_weight,
                objective: r.objective,
                ms: config.timing.then_some(ms),
                rounds: if config.log_rounds {
                    r.rounds.iter().map(ToString::to_string).collect()
                } else {
                    Vec::new()
                },
            })
        })
        .collect::<Result<_>>()?;

    // randomized bounds hold in expectation: test the trial mean of each instance
    let mut stats: Vec<Vec<f64>> = vec![Vec::new(); instances.len()];
    for (t, o) in trials.iter().zip(&outcomes) {
        stats[t.inst].push(to_f64(&o.objective));
    }

    let rows = trials
        .iter()
        .zip(outcomes)
        .map(|(t, o)| {
            let (id, inst) = &instances[t.inst];
            let (opt, gamma_ok) = &per_instance[t.inst];
            let bound = opt.as_ref().map(|v| &o.factor * v + &o.additive);
            let checkable = *gamma_ok == Some(true);
            let bound_pass = match (&bound, config.grid) {
                (Some(b), GridKind::Deterministic) if checkable => Some(o.objective <= *b),
                (Some(b), GridKind::Randomized) if checkable && stats[t.inst].len() >= 2 => {
                    let (mean, se) = mean_and_se(&stats[t.inst]);
                    Some(mean <= to_f64(b) + 3.0 * se)
                }
                _ => None,
            };
            Row {
                instance_id: id.clone(),
                model: inst.model(),
                muwp: config.muwp.name().to_string(),
                offline: config.offline.name().to_string(),
                grid: config.grid,
                seed: t.seed,
                eta: t.grid.eta().map(to_f64),
                objective: o.objective,
                opt_upper: opt.clone(),
                bound,
                bound_pass,
                runtime_ms: o.ms,
                lower_bound: inst.trivial_lower_bound(),
                factor: o.factor,
                rounds: o.rounds,
            }
        })
        .collect();
    Ok(rows)
}

struct Outcome {
    objective: Rational,
    factor: Rational,
    additive: Rational,
    ms: Option<f64>,
    rounds: Vec<String>,
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn violations(rows: &[Row]) -> usize {
    rows.iter().filter(|r| r.bound_pass == Some(false)).count()
}

fn num(v: &Rational) -> String {
    to_f64(v).to_string()
}

fn opt_str<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.instance_id.clone(),
            r.model.to_string(),
            r.muwp.clone(),
            r.offline.clone(),
            r.grid.to_string(),
            r.seed.to_string(),
            opt_str(r.eta, |e| e.to_string()),
            num(&r.objective),
            opt_str(r.opt_upper.as_ref(), num),
            opt_str(r.bound.as_ref(), num),
            opt_str(r.bound_pass, |b| b.to_string()),
            opt_str(r.empirical_ratio(), |x| x.to_string()),
            opt_str(r.runtime_ms, |x| format!("{x:.3}")),
            opt_str(r.lb_ratio(), |x| x.to_string()),
            num(&r.factor),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A row as read back from CSV, numbers as floats.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRow {
    pub instance_id: String,
    pub model: String,
    pub muwp: String,
    pub offline: String,
    pub grid: String,
    pub seed: u64,
    pub eta: Option<f64>,
    pub objective: f64,
    pub opt_upper: Option<f64>,
    pub bound: Option<f64>,
    pub bound_pass: Option<bool>,
    pub empirical_ratio: Option<f64>,
    pub runtime_ms: Option<f64>,
    pub lb_ratio: Option<f64>,
    pub factor: f64,
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().ne(HEADER) {
        bail!(
            "unexpected CSV header: {}",
            headers.iter().collect::<Vec<_>>().join(",")
        );
    }
    r.deserialize()
        .enumerate()
        .map(|(i, row)| row.with_context(|| format!("CSV row {}", i + 1)))
        .collect()
}

//! Instances for the three scheduling environments (concurrent open shop,
//! coflow, concurrent cluster), schedules, and objective evaluation.
//!
//! All times and weights are exact rationals.

mod format;
mod schedule;

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use format::{parse_instance, parse_rational, write_instance};
pub use schedule::{objective, validate, Schedule, Segment};

pub type Rational = num::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion for reporting.
pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float (every finite f64 is a dyadic rational).
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// `a` for integers, `a/b` otherwise.
/// Least common multiple of the denominators; multiplying by it makes every value integral.
pub fn denominator_lcm<'a>(vals: impl Iterator<Item = &'a Rational>) -> BigInt {
    vals.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn fmt_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Scheduling environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Cos,
    Coflow,
    Cluster,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Cos => "cos",
            Model::Coflow => "coflow",
            Model::Cluster => "cluster",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cos" => Ok(Model::Cos),
            "coflow" => Ok(Model::Coflow),
            "cluster" => Ok(Model::Cluster),
            _ => Err(format!(
                "unknown model `{s}` (expected cos, coflow or cluster)"
            )),
        }
    }
}

fn check_jobs(weights: &[Rational], releases: &[Rational]) -> Result<()> {
    if weights.len() != releases.len() {
        return Err(Error::Dimension(format!(
            "{} weights but {} release times",
            weights.len(),
            releases.len()
        )));
    }
    if let Some(j) = weights.iter().position(|w| w.is_negative()) {
        return Err(Error::InvalidInstance(format!(
            "job {j} has a negative weight"
        )));
    }
    if let Some(j) = releases.iter().position(|r| r.is_negative()) {
        return Err(Error::InvalidInstance(format!(
            "job {j} has a negative release time"
        )));
    }
    Ok(())
}

/// Concurrent open shop: job `j` has a component of length `p[i][j]` on every
/// machine `i`; components run concurrently and the job completes when its
/// last component does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosInstance {
    processing: Vec<Vec<Rational>>,
    releases: Vec<Rational>,
    weights: Vec<Rational>,
}

impl CosInstance {
    /// `processing` is indexed `[machine][job]`.
    pub fn new(
        processing: Vec<Vec<Rational>>,
        releases: Vec<Rational>,
        weights: Vec<Rational>,
    ) -> Result<Self> {
        check_jobs(&weights, &releases)?;
        let n = weights.len();
        for (i, row) in processing.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "machine {i} has {} processing times, expected {n}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|p| p.is_negative()) {
                return Err(Error::InvalidInstance(format!(
                    "negative processing time on machine {i} for job {j}"
                )));
            }
        }
        Ok(CosInstance {
            processing,
            releases,
            weights,
        })
    }

    /// Integer convenience constructor with all releases at zero.
    pub fn from_ints(processing: &[&[i64]], weights: &[i64]) -> Result<Self> {
        Self::from_ints_released(processing, &[], weights)
    }

    /// An empty `releases` slice means all zero.
    pub fn from_ints_released(
        processing: &[&[i64]],
        releases: &[i64],
        weights: &[i64],
    ) -> Result<Self> {
        let releases = if releases.is_empty() {
            vec![Rational::zero(); weights.len()]
        } else {
            releases.iter().map(|&r| int(r)).collect()
        };
        Self::new(
            processing
                .iter()
                .map(|row| row.iter().map(|&p| int(p)).collect())
                .collect(),
            releases,
            weights.iter().map(|&w| int(w)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.processing.len()
    }

    pub fn p(&self, machine: usize, job: usize) -> &Rational {
        &self.processing[machine][job]
    }

    pub fn processing(&self) -> &[Vec<Rational>] {
        &self.processing
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn releases(&self) -> &[Rational] {
        &self.releases
    }

    pub fn max_component(&self, job: usize) -> Rational {
        self.processing
            .iter()
            .map(|row| &row[job])
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Load of `jobs` on each machine.
    pub fn loads(&self, jobs: &[usize]) -> Vec<Rational> {
        self.processing
            .iter()
            .map(|row| jobs.iter().fold(Rational::zero(), |acc, &j| acc + &row[j]))
            .collect()
    }

    /// Minimum makespan of `jobs` ignoring release times: the largest machine load.
    pub fn batch_makespan(&self, jobs: &[usize]) -> Rational {
        self.loads(jobs)
            .into_iter()
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Sub-instance holding only `jobs`, renumbered `0..jobs.len()` in the given order.
    pub fn restrict(&self, jobs: &[usize]) -> CosInstance {
        CosInstance {
            processing: self
                .processing
                .iter()
                .map(|row| jobs.iter().map(|&j| row[j].clone()).collect())
                .collect(),
            releases: jobs.iter().map(|&j| self.releases[j].clone()).collect(),
            weights: jobs.iter().map(|&j| self.weights[j].clone()).collect(),
        }
    }

    /// Same jobs with every release time at zero.
    pub fn without_releases(&self) -> CosInstance {
        CosInstance {
            releases: vec![Rational::zero(); self.n()],
            ..self.clone()
        }
    }
}

/// Free-function form of [`CosInstance::batch_makespan`].
pub fn cos_batch_makespan(inst: &CosInstance, jobs: &[usize]) -> Rational {
    inst.batch_makespan(jobs)
}

/// Coflows on an `m x m` non-blocking switch. `demand[j][i][o]` is the data
/// coflow `j` sends from input port `i` to output port `o`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoflowInstance {
    ports: usize,
    demand: Vec<Vec<Vec<u64>>>,
    releases: Vec<Rational>,
    weights: Vec<Rational>,
}

impl CoflowInstance {
    pub fn new(
        ports: usize,
        demand: Vec<Vec<Vec<u64>>>,
        releases: Vec<Rational>,
        weights: Vec<Rational>,
    ) -> Result<Self> {
        check_jobs(&weights, &releases)?;
        if demand.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} demand matrices for {} coflows",
                demand.len(),
                weights.len()
            )));
        }
        for (j, d) in demand.iter().enumerate() {
            if d.len() != ports || d.iter().any(|row| row.len() != ports) {
                return Err(Error::Dimension(format!(
                    "coflow {j} demand is not {ports}x{ports}"
                )));
            }
        }
        Ok(CoflowInstance {
            ports,
            demand,
            releases,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn demand(&self, job: usize) -> &[Vec<u64>] {
        &self.demand[job]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn releases(&self) -> &[Rational] {
        &self.releases
    }
}

/// Reduction to concurrent open shop on `2m` machines: machine `i < m` carries
/// the row sum of input port `i`, machine `m + o` the column sum of output port `o`.
pub fn coflow_to_cos(inst: &CoflowInstance) -> CosInstance {
    let m = inst.ports;
    let mut processing = vec![vec![Rational::zero(); inst.n()]; 2 * m];
    for (j, d) in inst.demand.iter().enumerate() {
        for i in 0..m {
            let row: u64 = d[i].iter().sum();
            let col: u64 = d.iter().map(|r| r[i]).sum();
            processing[i][j] = Rational::from_integer(BigInt::from(row));
            processing[m + i][j] = Rational::from_integer(BigInt::from(col));
        }
    }
    CosInstance {
        processing,
        releases: inst.releases.clone(),
        weights: inst.weights.clone(),
    }
}

/// Concurrent cluster: cluster `i` has `sizes[i]` identical machines; job `j`
/// brings a list of tasks `tasks[j][i]` for every cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterInstance {
    sizes: Vec<usize>,
    tasks: Vec<Vec<Vec<Rational>>>,
    releases: Vec<Rational>,
    weights: Vec<Rational>,
}

impl ClusterInstance {
    pub fn new(
        sizes: Vec<usize>,
        tasks: Vec<Vec<Vec<Rational>>>,
        releases: Vec<Rational>,
        weights: Vec<Rational>,
    ) -> Result<Self> {
        check_jobs(&weights, &releases)?;
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidInstance(format!(
                "cluster {i} has no machines"
            )));
        }
        if tasks.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "task lists for {} jobs, expected {}",
                tasks.len(),
                weights.len()
            )));
        }
        for (j, per_cluster) in tasks.iter().enumerate() {
            if per_cluster.len() != sizes.len() {
                return Err(Error::Dimension(format!(
                    "job {j} has {} subjobs for {} clusters",
                    per_cluster.len(),
                    sizes.len()
                )));
            }
            if per_cluster.iter().flatten().any(|t| t.is_negative()) {
                return Err(Error::InvalidInstance(format!(
                    "job {j} has a negative task length"
                )));
            }
        }
        Ok(ClusterInstance {
            sizes,
            tasks,
            releases,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn tasks(&self, job: usize, cluster: usize) -> &[Rational] {
        &self.tasks[job][cluster]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn releases(&self) -> &[Rational] {
        &self.releases
    }

    /// First flattened machine index of each cluster, plus the total machine count.
    pub fn machine_offsets(&self) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.sizes.len());
        let mut total = 0;
        for &s in &self.sizes {
            offsets.push(total);
            total += s;
        }
        (offsets, total)
    }

    pub fn cluster_of_machine(&self, unit: usize) -> usize {
        let (offsets, _) = self.machine_offsets();
        offsets.iter().rposition(|&o| o <= unit).unwrap_or(0)
    }
}

/// Total work `P` and longest task `B` of job `job`'s subjob on `cluster`.
/// An empty subjob has `(0, 0)`.
pub fn cluster_aggregates(
    inst: &ClusterInstance,
    job: usize,
    cluster: usize,
) -> (Rational, Rational) {
    let tasks = &inst.tasks[job][cluster];
    let total = tasks.iter().fold(Rational::zero(), |acc, t| acc + t);
    let longest = tasks.iter().max().cloned().unwrap_or_else(Rational::zero);
    (total, longest)
}

/// Any of the three environments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Cos(CosInstance),
    Coflow(CoflowInstance),
    Cluster(ClusterInstance),
}

impl From<CosInstance> for Instance {
    fn from(v: CosInstance) -> Self {
        Instance::Cos(v)
    }
}

impl From<CoflowInstance> for Instance {
    fn from(v: CoflowInstance) -> Self {
        Instance::Coflow(v)
    }
}

impl From<ClusterInstance> for Instance {
    fn from(v: ClusterInstance) -> Self {
        Instance::Cluster(v)
    }
}

impl Instance {
    pub fn model(&self) -> Model {
        match self {
            Instance::Cos(_) => Model::Cos,
            Instance::Coflow(_) => Model::Coflow,
            Instance::Cluster(_) => Model::Cluster,
        }
    }

    pub fn n(&self) -> usize {
        self.weights().len()
    }

    pub fn weights(&self) -> &[Rational] {
        match self {
            Instance::Cos(c) => c.weights(),
            Instance::Coflow(c) => c.weights(),
            Instance::Cluster(c) => c.weights(),
        }
    }

    pub fn releases(&self) -> &[Rational] {
        match self {
            Instance::Cos(c) => c.releases(),
            Instance::Coflow(c) => c.releases(),
            Instance::Cluster(c) => c.releases(),
        }
    }

    pub fn total_weight(&self) -> Rational {
        self.weights()
            .iter()
            .fold(Rational::zero(), |acc, w| acc + w)
    }

    /// Execution units of a schedule: machines, ports (inputs then outputs),
    /// or cluster machines flattened cluster by cluster.
    pub fn unit_count(&self) -> usize {
        match self {
            Instance::Cos(c) => c.m(),
            Instance::Coflow(c) => 2 * c.ports(),
            Instance::Cluster(c) => c.machine_offsets().1,
        }
    }

    /// Concurrent open shop view used for batch feasibility. Coflows go through
    /// [`coflow_to_cos`]; clusters have no exact open shop view.
    pub fn cos_view(&self) -> Option<Cow<'_, CosInstance>> {
        match self {
            Instance::Cos(c) => Some(Cow::Borrowed(c)),
            Instance::Coflow(c) => Some(Cow::Owned(coflow_to_cos(c))),
            Instance::Cluster(_) => None,
        }
    }

    /// Largest single piece of work of `job`: its biggest component, port load
    /// or task.
    pub fn max_piece(&self, job: usize) -> Rational {
        match self {
            Instance::Cos(c) => c.max_component(job),
            Instance::Coflow(c) => coflow_to_cos(c).max_component(job),
            Instance::Cluster(c) => (0..c.m())
                .map(|i| cluster_aggregates(c, job, i).1)
                .max()
                .unwrap_or_else(Rational::zero),
        }
    }

    /// Online mode assumption: every job has some piece of size at least 1.
    pub fn check_online(&self) -> Result<()> {
        let cos = self.cos_view();
        for j in 0..self.n() {
            let size = match &cos {
                Some(c) => c.max_component(j),
                None => self.max_piece(j),
            };
            if size < Rational::one() {
                return Err(Error::NotOnline {
                    job: j,
                    size: fmt_rational(&size),
                });
            }
        }
        Ok(())
    }

    /// `sum_j w_j (r_j + size_j)` where `size_j` is the least time the job
    /// needs in isolation; a lower bound on the optimum.
    pub fn trivial_lower_bound(&self) -> Rational {
        let sizes: Vec<Rational> = match self {
            Instance::Cos(c) => (0..c.n()).map(|j| c.max_component(j)).collect(),
            Instance::Coflow(c) => {
                let cos = coflow_to_cos(c);
                (0..cos.n()).map(|j| cos.max_component(j)).collect()
            }
            Instance::Cluster(c) => (0..c.n())
                .map(|j| {
                    (0..c.m())
                        .map(|i| {
                            let (p, b) = cluster_aggregates(c, j, i);
                            let spread = p / int(c.sizes()[i] as i64);
                            spread.max(b)
                        })
                        .max()
                        .unwrap_or_else(Rational::zero)
                })
                .collect(),
        };
        self.weights()
            .iter()
            .zip(self.releases())
            .zip(sizes)
            .fold(Rational::zero(), |acc, ((w, r), s)| acc + w * (r + s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_makespan_is_max_load() {
        let inst = CosInstance::from_ints(&[&[1, 2], &[3, 1]], &[1, 1]).unwrap();
        assert_eq!(inst.batch_makespan(&[0, 1]), int(4));
        assert_eq!(inst.batch_makespan(&[]), int(0));
        let single = CosInstance::from_ints(&[&[5]], &[1]).unwrap();
        assert_eq!(cos_batch_makespan(&single, &[0]), int(5));
    }

    #[test]
    fn coflow_reduction_sums_rows_and_columns() {
        let inst = CoflowInstance::new(
            2,
            vec![vec![vec![1, 2], vec![3, 4]]],
            vec![int(0)],
            vec![int(1)],
        )
        .unwrap();
        let cos = coflow_to_cos(&inst);
        assert_eq!(cos.m(), 4);
        let p: Vec<Rational> = (0..4).map(|i| cos.p(i, 0).clone()).collect();
        assert_eq!(p, vec![int(3), int(7), int(4), int(6)]);

        let zero = CoflowInstance::new(
            2,
            vec![vec![vec![0, 0], vec![0, 0]]],
            vec![int(0)],
            vec![int(1)],
        )
        .unwrap();
        assert!(coflow_to_cos(&zero)
            .processing()
            .iter()
            .all(|row| row[0].is_zero()));

        let single =
            CoflowInstance::new(1, vec![vec![vec![9]]], vec![int(0)], vec![int(1)]).unwrap();
        let cos = coflow_to_cos(&single);
        assert_eq!((cos.p(0, 0), cos.p(1, 0)), (&int(9), &int(9)));
    }

    #[test]
    fn cluster_aggregates_sum_and_max() {
        let inst = ClusterInstance::new(
            vec![2, 1, 1],
            vec![vec![vec![int(5), int(4), int(3)], vec![], vec![int(7)]]],
            vec![int(0)],
            vec![int(1)],
        )
        .unwrap();
        assert_eq!(cluster_aggregates(&inst, 0, 0), (int(12), int(5)));
        assert_eq!(cluster_aggregates(&inst, 0, 1), (int(0), int(0)));
        assert_eq!(cluster_aggregates(&inst, 0, 2), (int(7), int(7)));
    }

    #[test]
    fn constructors_reject_bad_data() {
        assert!(matches!(
            CosInstance::from_ints(&[&[1, -2]], &[1, 1]),
            Err(Error::InvalidInstance(_))
        ));
        assert!(matches!(
            CosInstance::from_ints(&[&[1]], &[1, 1]),
            Err(Error::Dimension(_))
        ));
        assert!(ClusterInstance::new(vec![0], vec![], vec![], vec![]).is_err());
        assert!(CoflowInstance::new(2, vec![vec![vec![1]]], vec![int(0)], vec![int(1)]).is_err());
    }

    #[test]
    fn online_check_requires_unit_size() {
        let ok: Instance = CosInstance::from_ints(&[&[1, 0], &[0, 3]], &[1, 1])
            .unwrap()
            .into();
        assert!(ok.check_online().is_ok());
        let small: Instance = CosInstance::new(vec![vec![ratio(1, 2)]], vec![int(0)], vec![int(1)])
            .unwrap()
            .into();
        assert!(matches!(
            small.check_online(),
            Err(Error::NotOnline { job: 0, .. })
        ));
    }

    #[test]
    fn restrict_renumbers() {
        let inst = CosInstance::from_ints_released(&[&[1, 2, 3]], &[0, 5, 7], &[4, 5, 6]).unwrap();
        let sub = inst.restrict(&[2, 0]);
        assert_eq!(sub.weights(), &[int(6), int(4)]);
        assert_eq!(sub.releases(), &[int(7), int(0)]);
        assert_eq!(sub.processing()[0], vec![int(3), int(1)]);
    }
}

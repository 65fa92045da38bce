use std::collections::BTreeMap;

use num::Zero;

use super::{fmt_rational, Instance, Rational};
use crate::error::{Error, Result};

/// A job occupying one execution unit over `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub job: usize,
    pub start: Rational,
    pub end: Rational,
}

impl Segment {
    pub fn len(&self) -> Rational {
        &self.end - &self.start
    }
}

/// Ordered segments per execution unit, plus the completion time of every job
/// the schedule covers.
///
/// A job's completion is the latest end among its segments. Jobs without any
/// work are registered with [`Schedule::mark`] and complete at the marked time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    units: Vec<Vec<Segment>>,
    completion: BTreeMap<usize, Rational>,
}

impl Schedule {
    pub fn new(unit_count: usize) -> Self {
        Schedule {
            units: vec![Vec::new(); unit_count],
            completion: BTreeMap::new(),
        }
    }

    /// Appends a segment. Zero-length segments only register the job.
    pub fn push(&mut self, unit: usize, job: usize, start: Rational, end: Rational) {
        if start != end {
            self.units[unit].push(Segment {
                job,
                start,
                end: end.clone(),
            });
        }
        self.mark(job, end);
    }

    /// Registers `job` with completion time at least `at`.
    pub fn mark(&mut self, job: usize, at: Rational) {
        let entry = self.completion.entry(job).or_insert_with(|| at.clone());
        if *entry < at {
            *entry = at;
        }
    }

    pub fn units(&self) -> &[Vec<Segment>] {
        &self.units
    }

    pub fn completion(&self, job: usize) -> Option<&Rational> {
        self.completion.get(&job)
    }

    pub fn completions(&self) -> &BTreeMap<usize, Rational> {
        &self.completion
    }

    pub fn jobs(&self) -> impl Iterator<Item = usize> + '_ {
        self.completion.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.completion.is_empty()
    }

    /// Latest completion time, zero for an empty schedule.
    pub fn makespan(&self) -> Rational {
        self.completion
            .values()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `sum w_j C_j` over the jobs in this schedule, without validation.
    pub fn weighted_completion(&self, weights: &[Rational]) -> Rational {
        self.completion
            .iter()
            .fold(Rational::zero(), |acc, (&j, c)| acc + &weights[j] * c)
    }

    /// Merges another schedule over the same units into this one.
    pub fn absorb(&mut self, other: Schedule) {
        if self.units.len() < other.units.len() {
            self.units.resize(other.units.len(), Vec::new());
        }
        for (unit, segs) in other.units.into_iter().enumerate() {
            self.units[unit].extend(segs);
            self.units[unit].sort_by(|a, b| a.start.cmp(&b.start));
        }
        for (job, c) in other.completion {
            self.mark(job, c);
        }
    }
}

/// Checks `sched` against `inst`: units exist, segments are sorted and disjoint,
/// nothing starts before its release, every completion time matches its
/// segments, and each covered job receives exactly its required work.
pub fn validate(inst: &Instance, sched: &Schedule) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidSchedule(msg));
    if sched.units.len() != inst.unit_count() {
        return bad(format!(
            "schedule has {} units, instance has {}",
            sched.units.len(),
            inst.unit_count()
        ));
    }
    let n = inst.n();
    let releases = inst.releases();
    if let Some(&j) = sched.completion.keys().find(|&&j| j >= n) {
        return bad(format!("job {j} is not part of the instance"));
    }

    // work[unit][job] collects segment lengths
    let mut latest: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut pieces: Vec<BTreeMap<usize, Vec<Rational>>> = vec![BTreeMap::new(); sched.units.len()];
    for (u, segs) in sched.units.iter().enumerate() {
        for (k, seg) in segs.iter().enumerate() {
            if seg.job >= n || !sched.completion.contains_key(&seg.job) {
                return bad(format!("unit {u} runs unregistered job {}", seg.job));
            }
            if seg.start >= seg.end {
                return bad(format!("unit {u} segment {k} has non-positive length"));
            }
            if seg.start < releases[seg.job] {
                return bad(format!(
                    "job {} starts at {} on unit {u} before its release {}",
                    seg.job,
                    fmt_rational(&seg.start),
                    fmt_rational(&releases[seg.job])
                ));
            }
            if k > 0 && segs[k - 1].end > seg.start {
                return bad(format!(
                    "unit {u} segments {} and {k} overlap or are unsorted",
                    k - 1
                ));
            }
            let e = latest.entry(seg.job).or_insert_with(|| seg.end.clone());
            if *e < seg.end {
                *e = seg.end.clone();
            }
            pieces[u].entry(seg.job).or_default().push(seg.len());
        }
    }
    for (&j, c) in &sched.completion {
        if *c < releases[j] {
            return bad(format!("job {j} completes before its release"));
        }
        if let Some(end) = latest.get(&j) {
            if end != c {
                return bad(format!(
                    "job {j} has completion {} but its last segment ends at {}",
                    fmt_rational(c),
                    fmt_rational(end)
                ));
            }
        }
    }

    let sum = |v: Option<&Vec<Rational>>| v.map_or_else(Rational::zero, |v| v.iter().sum());
    match inst {
        Instance::Cos(_) | Instance::Coflow(_) => {
            let cos = inst.cos_view().expect("open shop view");
            for &j in sched.completion.keys() {
                for (u, unit_pieces) in pieces.iter().enumerate() {
                    let got = sum(unit_pieces.get(&j));
                    if &got != cos.p(u, j) {
                        return bad(format!(
                            "job {j} receives {} on unit {u}, requires {}",
                            fmt_rational(&got),
                            fmt_rational(cos.p(u, j))
                        ));
                    }
                }
            }
        }
        Instance::Cluster(c) => {
            let (offsets, total) = c.machine_offsets();
            for &j in sched.completion.keys() {
                for (i, &first) in offsets.iter().enumerate() {
                    let end = offsets.get(i + 1).copied().unwrap_or(total);
                    let mut got: Vec<Rational> = (first..end)
                        .flat_map(|u| pieces[u].get(&j).cloned().unwrap_or_default())
                        .collect();
                    let mut want: Vec<Rational> = c
                        .tasks(j, i)
                        .iter()
                        .filter(|t| !t.is_zero())
                        .cloned()
                        .collect();
                    got.sort();
                    want.sort();
                    if got != want {
                        return bad(format!(
                            "job {j} tasks on cluster {i} do not match its subjob"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `sum_j w_j C_j` of a complete, valid schedule.
pub fn objective(inst: &Instance, sched: &Schedule) -> Result<Rational> {
    validate(inst, sched)?;
    if let Some(j) = (0..inst.n()).find(|j| !sched.completion.contains_key(j)) {
        return Err(Error::InvalidSchedule(format!("job {j} is missing")));
    }
    Ok(sched.weighted_completion(inst.weights()))
}

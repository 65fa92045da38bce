use anyhow::{bail, Result};
use owct_core::model::{int, ClusterInstance, CoflowInstance, CosInstance, Instance, Model};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random instance parameters. Sizes, weights and releases are integers drawn
/// uniformly from the given ranges; releases are all zero when `horizon` is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub model: Model,
    pub n: usize,
    /// Machines, switch ports, or clusters.
    pub m: usize,
    pub seed: u64,
    pub pmin: u64,
    pub pmax: u64,
    pub wmin: u64,
    pub wmax: u64,
    pub horizon: u64,
    /// Largest cluster (clusters only).
    pub max_size: usize,
    /// Most tasks per subjob (clusters only).
    pub max_tasks: usize,
}

impl GenParams {
    pub fn new(model: Model, n: usize, m: usize, seed: u64) -> Self {
        GenParams {
            model,
            n,
            m,
            seed,
            pmin: 1,
            pmax: 20,
            wmin: 1,
            wmax: 10,
            horizon: 0,
            max_size: 3,
            max_tasks: 4,
        }
    }

    fn check(&self) -> Result<()> {
        if self.m == 0 {
            bail!("need at least one machine, port or cluster");
        }
        if self.pmin > self.pmax || self.pmax == 0 {
            bail!("invalid size range [{}, {}]", self.pmin, self.pmax);
        }
        if self.wmin > self.wmax {
            bail!("invalid weight range [{}, {}]", self.wmin, self.wmax);
        }
        if self.model == Model::Cluster && (self.max_size == 0 || self.max_tasks == 0) {
            bail!("clusters need max size and max tasks of at least 1");
        }
        Ok(())
    }
}

pub fn generate(p: &GenParams) -> Result<Instance> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let size = |rng: &mut ChaCha8Rng| rng.gen_range(p.pmin..=p.pmax);
    // every job needs a piece of size at least 1
    let positive = |rng: &mut ChaCha8Rng| rng.gen_range(p.pmin.max(1)..=p.pmax);

    let inst = match p.model {
        Model::Cos => {
            let mut proc: Vec<Vec<u64>> = (0..p.m)
                .map(|_| (0..p.n).map(|_| size(&mut rng)).collect())
                .collect();
            for j in 0..p.n {
                if proc.iter().all(|row| row[j] == 0) {
                    let i = rng.gen_range(0..p.m);
                    proc[i][j] = positive(&mut rng);
                }
            }
            let proc = proc
                .into_iter()
                .map(|row| row.into_iter().map(|v| int(v as i64)).collect())
                .collect();
            Instance::Cos(CosInstance::new(
                proc,
                releases(&mut rng, p),
                weights(&mut rng, p),
            )?)
        }
        Model::Coflow => {
            let demand: Vec<Vec<Vec<u64>>> = (0..p.n)
                .map(|_| {
                    let mut d: Vec<Vec<u64>> = (0..p.m)
                        .map(|_| (0..p.m).map(|_| size(&mut rng)).collect())
                        .collect();
                    if d.iter().flatten().all(|&v| v == 0) {
                        let (i, o) = (rng.gen_range(0..p.m), rng.gen_range(0..p.m));
                        d[i][o] = positive(&mut rng);
                    }
                    d
                })
                .collect();
            Instance::Coflow(CoflowInstance::new(
                p.m,
                demand,
                releases(&mut rng, p),
                weights(&mut rng, p),
            )?)
        }
        Model::Cluster => {
            let sizes: Vec<usize> = (0..p.m).map(|_| rng.gen_range(1..=p.max_size)).collect();
            let tasks = (0..p.n)
                .map(|_| {
                    let mut per: Vec<Vec<_>> = (0..p.m)
                        .map(|_| {
                            let count = rng.gen_range(0..=p.max_tasks);
                            (0..count).map(|_| int(positive(&mut rng) as i64)).collect()
                        })
                        .collect();
                    if per.iter().all(Vec::is_empty) {
                        let i = rng.gen_range(0..p.m);
                        per[i].push(int(positive(&mut rng) as i64));
                    }
                    per
                })
                .collect();
            Instance::Cluster(ClusterInstance::new(
                sizes,
                tasks,
                releases(&mut rng, p),
                weights(&mut rng, p),
            )?)
        }
    };
    Ok(inst)
}

fn releases(rng: &mut ChaCha8Rng, p: &GenParams) -> Vec<owct_core::Rational> {
    (0..p.n)
        .map(|_| {
            int(if p.horizon == 0 {
                0
            } else {
                rng.gen_range(0..=p.horizon) as i64
            })
        })
        .collect()
}

fn weights(rng: &mut ChaCha8Rng, p: &GenParams) -> Vec<owct_core::Rational> {
    (0..p.n)
        .map(|_| int(rng.gen_range(p.wmin..=p.wmax) as i64))
        .collect()
}

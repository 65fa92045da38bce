#![allow(dead_code)]

use owct_core::model::{int, ClusterInstance, CoflowInstance, CosInstance};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer processing times in `[pmin, pmax]`, weights in `[1, 10]`, releases
/// uniform in `[0, horizon]` (all zero when `horizon == 0`).
pub fn random_cos(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    pmin: i64,
    pmax: i64,
    horizon: i64,
) -> CosInstance {
    let processing = (0..m)
        .map(|_| (0..n).map(|_| int(rng.gen_range(pmin..=pmax))).collect())
        .collect();
    let releases = (0..n)
        .map(|_| {
            int(if horizon > 0 {
                rng.gen_range(0..=horizon)
            } else {
                0
            })
        })
        .collect();
    let weights = (0..n).map(|_| int(rng.gen_range(1..=10))).collect();
    CosInstance::new(processing, releases, weights).unwrap()
}

pub fn random_coflow(
    rng: &mut ChaCha8Rng,
    n: usize,
    ports: usize,
    dmax: u64,
    horizon: i64,
) -> CoflowInstance {
    let demand = (0..n)
        .map(|_| {
            let mut d: Vec<Vec<u64>> = (0..ports)
                .map(|_| (0..ports).map(|_| rng.gen_range(0..=dmax)).collect())
                .collect();
            if d.iter().flatten().all(|&v| v == 0) {
                d[0][0] = 1;
            }
            d
        })
        .collect();
    let releases = (0..n)
        .map(|_| {
            int(if horizon > 0 {
                rng.gen_range(0..=horizon)
            } else {
                0
            })
        })
        .collect();
    let weights = (0..n).map(|_| int(rng.gen_range(1..=10))).collect();
    CoflowInstance::new(ports, demand, releases, weights).unwrap()
}

pub fn random_cluster(
    rng: &mut ChaCha8Rng,
    n: usize,
    clusters: usize,
    max_size: usize,
    max_tasks: usize,
    horizon: i64,
) -> ClusterInstance {
    let sizes: Vec<usize> = (0..clusters).map(|_| rng.gen_range(1..=max_size)).collect();
    let tasks = (0..n)
        .map(|_| {
            let mut per: Vec<Vec<_>> = (0..clusters)
                .map(|_| {
                    let count = rng.gen_range(0..=max_tasks);
                    (0..count).map(|_| int(rng.gen_range(1..=20))).collect()
                })
                .collect();
            if per.iter().all(Vec::is_empty) {
                per[0].push(int(rng.gen_range(1..=20)));
            }
            per
        })
        .collect();
    let releases = (0..n)
        .map(|_| {
            int(if horizon > 0 {
                rng.gen_range(0..=horizon)
            } else {
                0
            })
        })
        .collect();
    let weights = (0..n).map(|_| int(rng.gen_range(1..=10))).collect();
    ClusterInstance::new(sizes, tasks, releases, weights).unwrap()
}

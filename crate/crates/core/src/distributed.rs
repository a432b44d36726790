//! Distorted-greedy and its multi-round distributed wrapper.
//!
//! Machines are simulated inside the process. Each round shards the ground
//! set uniformly at random, every machine runs distorted greedy on its shard
//! together with every set produced in earlier rounds, and the round's sets
//! join the shared pool. A machine sees only `(shard, pool)` and returns one
//! set, which is where a real transport would attach.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::objectives::{ElementId, RegularizedInstance, Solution, SubmodularOracle};

/// Distorted greedy restricted to `candidates`.
///
/// Iteration `i` (0-based) scores every unused candidate by
/// `(1 − 1/k)^{k−(i+1)}·g(u | S) − ℓ_u` and adds the best one if its score is
/// positive. Ties go to the smallest id.
pub fn distorted_greedy<O: SubmodularOracle>(instance: &RegularizedInstance<O>, candidates: &[ElementId]) -> Vec<ElementId> {
    distorted_greedy_counted(instance, candidates).0
}

/// [`distorted_greedy`] that also reports how many marginals it evaluated.
pub fn distorted_greedy_counted<O: SubmodularOracle>(
    instance: &RegularizedInstance<O>,
    candidates: &[ElementId],
) -> (Vec<ElementId>, u64) {
    let mut pool: Vec<ElementId> = candidates.to_vec();
    pool.sort_unstable();
    pool.dedup();

    let k = instance.k();
    let shrink = 1.0 - 1.0 / k as f64;
    let mut selected = Vec::with_capacity(k);
    let mut evaluations = 0u64;
    for i in 0..k {
        // powi(0) is 1, which also covers 0⁰ when k = 1.
        let weight = shrink.powi((k - i - 1) as i32);
        let mut best: Option<(usize, f64)> = None;
        for (pos, &u) in pool.iter().enumerate() {
            let score = weight * instance.oracle().marginal(u, &selected) - instance.cost().of(u);
            evaluations += 1;
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((pos, score));
            }
        }
        if let Some((pos, score)) = best {
            if score > 0.0 {
                selected.push(pool.remove(pos));
            }
        }
    }
    (selected, evaluations)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributedConfig {
    pub machines: usize,
    /// Accuracy in `(0, 1/2]`; the run uses `⌈1/eps⌉` rounds. Values above
    /// 1/2 are accepted and give a single round. Prefer `eps = 1/t`.
    pub eps: f64,
    pub seed: u64,
}

impl DistributedConfig {
    pub fn new(machines: usize, eps: f64, seed: u64) -> Result<Self> {
        let cfg = Self { machines, eps, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.machines == 0 {
            return Err(Error::Config("at least one machine is required".into()));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }

    pub fn rounds(&self) -> usize {
        ((1.0 / self.eps) - 1e-9).ceil().max(1.0) as usize
    }
}

/// Machine chosen for `element` in `round`.
///
/// Draws from a ChaCha stream keyed by `(seed, round)` at a word offset fixed by
/// the element id, so each assignment is independent of evaluation order.
pub fn assign_machine(seed: u64, round: usize, element: ElementId, machines: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round as u64);
    rng.set_word_pos(element as u128 * 16);
    rng.random_range(0..machines)
}

/// Element-to-machine map of one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundAssignment {
    pub round: usize,
    pub machine_of: Vec<usize>,
}

impl RoundAssignment {
    pub fn new(n: usize, round: usize, cfg: &DistributedConfig) -> Self {
        let machine_of = (0..n)
            .map(|u| assign_machine(cfg.seed, round, u, cfg.machines))
            .collect();
        Self { round, machine_of }
    }

    pub fn shards(&self, machines: usize) -> Vec<Vec<ElementId>> {
        let mut shards = vec![Vec::new(); machines];
        for (u, &i) in self.machine_of.iter().enumerate() {
            shards[i].push(u);
        }
        shards
    }
}

/// A set `S_{r,i}` produced by machine `i` in round `r` (both 1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct PooledSet {
    pub round: usize,
    pub machine: usize,
    pub elements: Vec<ElementId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineReport {
    pub round: usize,
    pub machine: usize,
    pub shard_size: usize,
    /// Size of shard ∪ pooled elements handed to the machine.
    pub candidate_size: usize,
    pub pool_sets: usize,
    pub evaluations: u64,
}

#[derive(Debug, Clone)]
pub struct DistributedRun {
    pub solution: Solution,
    pub pool: Vec<PooledSet>,
    pub machines: Vec<MachineReport>,
}

/// Multi-round distributed distorted greedy.
pub fn run_distributed<O: SubmodularOracle>(instance: &RegularizedInstance<O>, cfg: &DistributedConfig) -> Result<DistributedRun> {
    cfg.validate()?;
    let rounds = cfg.rounds();
    let mut pool: Vec<PooledSet> = Vec::new();
    let mut reports = Vec::new();
    let mut last_first: Vec<ElementId> = Vec::new();

    for round in 1..=rounds {
        let shards = RoundAssignment::new(instance.n(), round, cfg).shards(cfg.machines);
        let mut pooled: Vec<ElementId> = pool.iter().flat_map(|s| s.elements.iter().copied()).collect();
        pooled.sort_unstable();
        pooled.dedup();
        let pool_sets = pool.len();

        let outputs: Vec<(Vec<ElementId>, MachineReport)> = shards
            .par_iter()
            .enumerate()
            .map(|(i, shard)| {
                let mut candidates = shard.clone();
                candidates.extend_from_slice(&pooled);
                candidates.sort_unstable();
                candidates.dedup();
                let (set, evaluations) = distorted_greedy_counted(instance, &candidates);
                let report = MachineReport {
                    round,
                    machine: i + 1,
                    shard_size: shard.len(),
                    candidate_size: candidates.len(),
                    pool_sets,
                    evaluations,
                };
                (set, report)
            })
            .collect();

        if round < rounds {
            for (i, (set, report)) in outputs.into_iter().enumerate() {
                pool.push(PooledSet {
                    round,
                    machine: i + 1,
                    elements: set,
                });
                reports.push(report);
            }
        } else {
            // Only machine 1's final set competes for the answer.
            for (i, (set, report)) in outputs.into_iter().enumerate() {
                if i == 0 {
                    last_first = set;
                }
                reports.push(report);
            }
        }
    }

    let mut best_set = last_first.clone();
    let mut best_f = instance.f(&best_set);
    let mut origin = format!("distributed round={rounds} machine=1");
    for s in &pool {
        let f = instance.f(&s.elements);
        if f > best_f {
            best_f = f;
            best_set = s.elements.clone();
            origin = format!("distributed round={} machine={}", s.round, s.machine);
        }
    }
    pool.push(PooledSet {
        round: rounds,
        machine: 1,
        elements: last_first,
    });
    Ok(DistributedRun {
        solution: instance.solution(best_set, origin),
        pool,
        machines: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{vertex_cover_cost, DiGraph, ModularCost, ModularOracle, VertexCover};

    fn triangle(k: usize) -> RegularizedInstance<VertexCover> {
        let graph = DiGraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let cost = vertex_cover_cost(&graph.out_degrees(), 6);
        RegularizedInstance::new(VertexCover::unit_weights(graph), cost, k).unwrap()
    }

    #[test]
    fn distorted_greedy_on_triangle() {
        let inst = triangle(1);
        let set = distorted_greedy(&inst, &[0, 1, 2]);
        assert_eq!(set, vec![0]);
        assert_eq!(inst.f(&set), 2.0);
        assert!(distorted_greedy(&inst, &[]).is_empty());
    }

    #[test]
    fn unprofitable_candidates_are_skipped() {
        let g = ModularOracle::new(vec![1.0, 1.0]).unwrap();
        let inst = RegularizedInstance::new(&g, ModularCost::new(vec![2.0, 2.0]).unwrap(), 2).unwrap();
        assert!(distorted_greedy(&inst, &[0, 1]).is_empty());
    }

    #[test]
    fn early_iterations_are_damped() {
        // k = 2: the first iteration weighs marginals by 1/2, so an element with
        // g = 1.5, ℓ = 1 is skipped first and taken second.
        let g = ModularOracle::new(vec![1.5]).unwrap();
        let inst = RegularizedInstance::new(&g, ModularCost::new(vec![1.0]).unwrap(), 2).unwrap();
        let (set, evals) = distorted_greedy_counted(&inst, &[0]);
        assert_eq!(set, vec![0]);
        assert_eq!(evals, 2);
    }

    #[test]
    fn rounds_follow_eps() {
        let r = |eps| DistributedConfig::new(2, eps, 0).unwrap().rounds();
        assert_eq!(r(1.0), 1);
        assert_eq!(r(0.5), 2);
        assert_eq!(r(1.0 / 3.0), 3);
        assert_eq!(r(0.3), 4);
        assert_eq!(r(0.9), 2);
        assert!(DistributedConfig::new(0, 0.5, 0).is_err());
    }

    #[test]
    fn shards_partition_the_ground_set() {
        let cfg = DistributedConfig::new(4, 0.5, 11).unwrap();
        let a = RoundAssignment::new(1000, 1, &cfg);
        let shards = a.shards(4);
        let mut all: Vec<usize> = shards.concat();
        all.sort_unstable();
        assert_eq!(all, (0..1000).collect::<Vec<_>>());
        assert_eq!(a, RoundAssignment::new(1000, 1, &cfg));
        assert_ne!(a, RoundAssignment::new(1000, 2, &cfg));
    }

    #[test]
    fn machine_frequencies_are_uniform() {
        let cfg = DistributedConfig::new(5, 0.5, 3).unwrap();
        let n = 20_000;
        let counts: Vec<usize> = RoundAssignment::new(n, 1, &cfg).shards(5).iter().map(Vec::len).collect();
        let mean = n as f64 / 5.0;
        let sd = (n as f64 * 0.2 * 0.8).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() <= 4.0 * sd, "{c}");
        }
    }

    #[test]
    fn single_machine_single_round_is_plain_distorted_greedy() {
        let inst = triangle(2);
        let run = run_distributed(&inst, &DistributedConfig::new(1, 1.0, 9).unwrap()).unwrap();
        assert_eq!(run.solution.elements, distorted_greedy(&inst, &[0, 1, 2]));
    }
}

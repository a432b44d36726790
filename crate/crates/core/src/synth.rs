//! Seeded generators for graphs, features and small random instances.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::objectives::{
    similarity_from_features, DenseMatrix, DiGraph, FacilityLocation, LogDet, Metric, ModularCost, ModularOracle,
    RegularizedInstance, SaturatingCoverage, ScoreEntry, SubmodularOracle, VertexCover,
};

/// Directed `G(n, p)` without self-loops.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> DiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    DiGraph::from_edges(n, edges).expect("generated ids are in range")
}

/// `n × dim` matrix of standard normal entries.
pub fn random_features(n: usize, dim: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    DenseMatrix::new(n, dim, data).expect("shape matches data")
}

/// `n × n` PSD Gram matrix `XXᵀ/dim` of random features.
pub fn random_gram(n: usize, dim: usize, seed: u64) -> DenseMatrix {
    let x = random_features(n, dim, seed).to_nalgebra();
    let g = &x * x.transpose() / dim as f64;
    let sym = (&g + g.transpose()) * 0.5;
    DenseMatrix::from_nalgebra(&sym)
}

/// `(word, element, value)` triples with `words` words and roughly
/// `density·words·n` non-zero scores in `[0, 1)`.
pub fn random_scores(n: usize, words: usize, density: f64, seed: u64) -> Vec<ScoreEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for word in 0..words {
        for element in 0..n {
            if rng.random_bool(density.clamp(0.0, 1.0)) {
                out.push(ScoreEntry {
                    word,
                    element,
                    value: rng.random(),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomObjective {
    Modular,
    Coverage,
    Facility,
    Saturating,
    LogDet,
}

impl RandomObjective {
    pub const ALL: [RandomObjective; 5] = [
        RandomObjective::Modular,
        RandomObjective::Coverage,
        RandomObjective::Facility,
        RandomObjective::Saturating,
        RandomObjective::LogDet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RandomObjective::Modular => "modular",
            RandomObjective::Coverage => "coverage",
            RandomObjective::Facility => "facility",
            RandomObjective::Saturating => "saturating",
            RandomObjective::LogDet => "logdet",
        }
    }
}

pub type BoxedOracle = Box<dyn SubmodularOracle>;

/// A random oracle of the requested kind over `n` elements.
pub fn random_oracle(kind: RandomObjective, n: usize, seed: u64) -> Result<BoxedOracle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sub = rng.random::<u64>();
    Ok(match kind {
        RandomObjective::Modular => {
            Box::new(ModularOracle::new((0..n).map(|_| rng.random_range(0.0..3.0)).collect())?)
        }
        RandomObjective::Coverage => {
            let p = rng.random_range(0.1..0.5);
            let graph = random_digraph(n, p, sub);
            let weights = (0..n).map(|_| rng.random_range(0.2..2.0)).collect();
            Box::new(VertexCover::new(graph, weights)?)
        }
        RandomObjective::Facility => {
            let dim = rng.random_range(2..5);
            let sim = similarity_from_features(&random_features(n, dim, sub), Metric::Euclidean)?;
            Box::new(FacilityLocation::new(sim)?)
        }
        RandomObjective::Saturating => {
            let words = rng.random_range(2..6);
            Box::new(SaturatingCoverage::new(n, &random_scores(n, words, 0.5, sub))?)
        }
        RandomObjective::LogDet => {
            let dim = rng.random_range(2..6);
            Box::new(LogDet::new(random_gram(n, dim, sub), rng.random_range(0.5..2.0))?)
        }
    })
}

/// Costs `ℓ_u = scale·U_u·g({u})` with `U_u ~ U(0, 1)`, so a fraction of the
/// elements is unprofitable when `scale > 1`.
pub fn random_costs<O: SubmodularOracle + ?Sized>(oracle: &O, scale: f64, seed: u64) -> Result<ModularCost> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let costs = (0..oracle.n())
        .map(|u| scale * rng.random::<f64>() * oracle.value(&[u]).max(0.0))
        .collect();
    ModularCost::new(costs)
}

/// Random regularized instance with `n ≤ n_max`, `k ≤ k_max`, a random
/// objective kind and costs scaled by a factor in `[0, 1.5)`.
pub fn random_instance(
    n_max: usize,
    k_max: usize,
    seed: u64,
) -> Result<(RandomObjective, RegularizedInstance<BoxedOracle>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=n_max.max(1));
    let k = rng.random_range(1..=k_max.max(1));
    let kind = *RandomObjective::ALL.choose(&mut rng).expect("non-empty");
    let oracle = random_oracle(kind, n, rng.random())?;
    let scale = rng.random_range(0.0..1.5);
    let cost = random_costs(&*oracle, scale, rng.random())?;
    Ok((kind, RegularizedInstance::new(oracle, cost, k)?))
}

/// Random permutation of `0..n`.
pub fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

use crate::error::{Error, Result};

use super::{ElementId, ModularCost, SubmodularOracle};

/// Directed simple graph over `0..n`: parallel edges collapsed, self-loops dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    out: Vec<Vec<usize>>,
}

impl DiGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        for (src, dst) in edges {
            if src >= n || dst >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({src}, {dst}) refers to a node outside 0..{n}"
                )));
            }
            if src != dst {
                out[src].push(dst);
            }
        }
        for adj in &mut out {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(Self { out })
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out.iter().map(Vec::len).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |&v| (u, v)))
    }
}

/// `ℓ_u = 1 + max(0, d_u − q)`.
pub fn vertex_cover_cost(out_degrees: &[usize], q: i64) -> ModularCost {
    let costs = out_degrees
        .iter()
        .map(|&d| 1.0 + (d as i64 - q).max(0) as f64)
        .collect();
    ModularCost::new(costs).expect("vertex cover costs are at least one")
}

/// Weighted directed coverage: `g(S) = Σ_{v ∈ S ∪ N⁺(S)} w_v`.
#[derive(Debug, Clone)]
pub struct VertexCover {
    graph: DiGraph,
    weights: Vec<f64>,
}

impl VertexCover {
    pub fn new(graph: DiGraph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != graph.n() {
            return Err(Error::InvalidInput(format!(
                "{} weights for a graph with {} nodes",
                weights.len(),
                graph.n()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidInput("node weights must be non-negative".into()));
        }
        Ok(Self { graph, weights })
    }

    pub fn unit_weights(graph: DiGraph) -> Self {
        let weights = vec![1.0; graph.n()];
        Self { graph, weights }
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    fn covered(&self, set: &[ElementId]) -> Vec<bool> {
        let mut covered = vec![false; self.graph.n()];
        for &u in set {
            covered[u] = true;
            for &v in self.graph.out_neighbors(u) {
                covered[v] = true;
            }
        }
        covered
    }
}

impl SubmodularOracle for VertexCover {
    fn n(&self) -> usize {
        self.graph.n()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        self.covered(set)
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| **c)
            .map(|(_, w)| w)
            .sum()
    }

    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        let mut covered = self.covered(set);
        let mut gain = 0.0;
        for v in std::iter::once(u).chain(self.graph.out_neighbors(u).iter().copied()) {
            if !covered[v] {
                covered[v] = true;
                gain += self.weights[v];
            }
        }
        gain
    }
}

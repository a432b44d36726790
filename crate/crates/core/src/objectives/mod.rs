//! Ground sets, value oracles and cost vectors.
//!
//! Every algorithm in this crate talks to the objective exclusively through
//! [`SubmodularOracle`] (the monotone submodular part `g`) and [`ModularCost`]
//! (the non-negative linear part `ℓ`). A [`RegularizedInstance`] ties the two
//! together with a cardinality budget `k` and evaluates `f(S) = g(S) − ℓ(S)`.
//!
//! Sets are passed around as slices of distinct [`ElementId`]s. Order inside
//! a slice carries no meaning for the oracles.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

mod coverage;
mod facility;
mod logdet;
mod matrix;
mod reservoir;
mod saturating;

pub use coverage::{vertex_cover_cost, DiGraph, VertexCover};
pub use facility::{similarity_from_features, FacilityLocation, Metric, SampledFacilityLocation};
pub use logdet::{logdet_value, LogDet};
pub use matrix::DenseMatrix;
pub use reservoir::ReservoirEstimator;
pub use saturating::{SaturatingCoverage, ScoreEntry};

/// Dense index into the ground set, `0 <= id < n`.
pub type ElementId = usize;

/// Value oracle for a set function `g` over the ground set `0..n`.
///
/// Implementations shipped with this crate are normalized (`value(&[]) == 0`),
/// monotone and submodular. Those properties are checked by property tests,
/// not at call time.
pub trait SubmodularOracle: Send + Sync {
    /// Size of the ground set.
    fn n(&self) -> usize;

    fn value(&self, set: &[ElementId]) -> f64;

    /// `value(set ∪ {u}) − value(set)`; zero when `u` is already in `set`.
    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        if set.contains(&u) {
            return 0.0;
        }
        let mut with = Vec::with_capacity(set.len() + 1);
        with.extend_from_slice(set);
        with.push(u);
        self.value(&with) - self.value(set)
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for &T {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn value(&self, set: &[ElementId]) -> f64 {
        (**self).value(set)
    }
    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        (**self).marginal(u, set)
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for Box<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn value(&self, set: &[ElementId]) -> f64 {
        (**self).value(set)
    }
    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        (**self).marginal(u, set)
    }
}

impl<T: SubmodularOracle + ?Sized> SubmodularOracle for Arc<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn value(&self, set: &[ElementId]) -> f64 {
        (**self).value(set)
    }
    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        (**self).marginal(u, set)
    }
}

/// Non-negative modular cost `ℓ(S) = Σ_{u∈S} ℓ_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularCost {
    costs: Vec<f64>,
}

impl ModularCost {
    pub fn new(costs: Vec<f64>) -> Result<Self> {
        if let Some((u, c)) = costs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || **c < 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "cost of element {u} is {c}; costs must be finite and non-negative"
            )));
        }
        Ok(Self { costs })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            costs: vec![0.0; n],
        }
    }

    pub fn uniform(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    #[inline]
    pub fn of(&self, u: ElementId) -> f64 {
        self.costs[u]
    }

    pub fn total(&self, set: &[ElementId]) -> f64 {
        set.iter().fold(0.0, |acc, &u| acc + self.costs[u])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.costs
    }
}

/// Modular `g(S) = Σ_{u∈S} w_u` with non-negative weights.
#[derive(Debug, Clone)]
pub struct ModularOracle {
    weights: Vec<f64>,
}

impl ModularOracle {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidInput(
                "modular weights must be finite and non-negative".into(),
            ));
        }
        Ok(Self { weights })
    }
}

impl SubmodularOracle for ModularOracle {
    fn n(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        set.iter().fold(0.0, |acc, &u| acc + self.weights[u])
    }

    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        if set.contains(&u) {
            0.0
        } else {
            self.weights[u]
        }
    }
}

/// Wraps an oracle and counts every `value` and `marginal` call.
///
/// Counters are atomic, so a single wrapper can be shared across worker
/// threads.
#[derive(Debug)]
pub struct CountingOracle<O> {
    inner: O,
    values: AtomicU64,
    marginals: AtomicU64,
}

impl<O: SubmodularOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            values: AtomicU64::new(0),
            marginals: AtomicU64::new(0),
        }
    }

    /// Total number of oracle invocations so far.
    pub fn calls(&self) -> u64 {
        self.value_calls() + self.marginal_calls()
    }

    pub fn value_calls(&self) -> u64 {
        self.values.load(Ordering::Relaxed)
    }

    pub fn marginal_calls(&self) -> u64 {
        self.marginals.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.values.store(0, Ordering::Relaxed);
        self.marginals.store(0, Ordering::Relaxed);
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: SubmodularOracle> SubmodularOracle for CountingOracle<O> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        self.values.fetch_add(1, Ordering::Relaxed);
        self.inner.value(set)
    }

    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        self.marginals.fetch_add(1, Ordering::Relaxed);
        self.inner.marginal(u, set)
    }
}

/// `max_{|S| ≤ k} g(S) − ℓ(S)` problem data.
#[derive(Debug, Clone)]
pub struct RegularizedInstance<O> {
    oracle: O,
    cost: ModularCost,
    k: usize,
}

impl<O: SubmodularOracle> RegularizedInstance<O> {
    pub fn new(oracle: O, cost: ModularCost, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("budget k must be at least 1".into()));
        }
        if cost.len() != oracle.n() {
            return Err(Error::InvalidInput(format!(
                "cost vector has length {} but the ground set has {} elements",
                cost.len(),
                oracle.n()
            )));
        }
        Ok(Self { oracle, cost, k })
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn cost(&self) -> &ModularCost {
        &self.cost
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.oracle.n()
    }

    /// Same instance with a different budget.
    pub fn with_budget(&self, k: usize) -> Result<RegularizedInstance<&O>> {
        RegularizedInstance::new(&self.oracle, self.cost.clone(), k)
    }

    /// Borrowing view, handy for passing an owned instance to generic code.
    pub fn as_ref(&self) -> RegularizedInstance<&O> {
        RegularizedInstance {
            oracle: &self.oracle,
            cost: self.cost.clone(),
            k: self.k,
        }
    }

    pub fn into_parts(self) -> (O, ModularCost) {
        (self.oracle, self.cost)
    }

    pub fn g(&self, set: &[ElementId]) -> f64 {
        self.oracle.value(set)
    }

    pub fn ell(&self, set: &[ElementId]) -> f64 {
        self.cost.total(set)
    }

    pub fn f(&self, set: &[ElementId]) -> f64 {
        self.g(set) - self.ell(set)
    }

    /// Evaluates `set` once and packages it as a [`Solution`].
    pub fn solution(&self, mut elements: Vec<ElementId>, provenance: impl Into<String>) -> Solution {
        elements.sort_unstable();
        let g_value = self.g(&elements);
        let ell_value = self.ell(&elements);
        Solution {
            elements,
            f_value: g_value - ell_value,
            g_value,
            ell_value,
            oracle_calls: 0,
            provenance: provenance.into(),
        }
    }
}

/// A selected set together with its objective breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Selected elements, sorted ascending.
    pub elements: Vec<ElementId>,
    pub f_value: f64,
    pub g_value: f64,
    pub ell_value: f64,
    /// Filled in by callers that run through a [`CountingOracle`]; zero otherwise.
    pub oracle_calls: u64,
    /// Which algorithm (and which internal copy) produced the set.
    pub provenance: String,
}

impl Solution {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_rejects_negative_entries() {
        assert!(ModularCost::new(vec![1.0, -0.5]).is_err());
        assert!(ModularCost::new(vec![f64::NAN]).is_err());
        let c = ModularCost::new(vec![1.0, 2.5, 0.0]).unwrap();
        assert_eq!(c.total(&[]), 0.0);
        assert_eq!(c.total(&[0, 1]), 3.5);
    }

    #[test]
    fn instance_validates_budget_and_lengths() {
        let g = ModularOracle::new(vec![1.0, 2.0]).unwrap();
        assert!(RegularizedInstance::new(&g, ModularCost::zeros(2), 0).is_err());
        assert!(RegularizedInstance::new(&g, ModularCost::zeros(3), 1).is_err());
        let inst = RegularizedInstance::new(&g, ModularCost::new(vec![0.5, 0.5]).unwrap(), 2).unwrap();
        let s = inst.solution(vec![1, 0], "test");
        assert_eq!(s.elements, vec![0, 1]);
        assert_eq!(s.g_value, 3.0);
        assert_eq!(s.f_value, 2.0);
    }

    #[test]
    fn counting_oracle_counts_each_invocation() {
        let g = CountingOracle::new(ModularOracle::new(vec![1.0; 4]).unwrap());
        g.value(&[0, 1]);
        g.marginal(2, &[0]);
        g.marginal(2, &[2]);
        assert_eq!(g.value_calls(), 1);
        assert_eq!(g.marginal_calls(), 2);
        assert_eq!(g.calls(), 3);
        g.reset();
        assert_eq!(g.calls(), 0);
    }

    #[test]
    fn counting_oracle_is_safe_under_concurrent_use() {
        let g = CountingOracle::new(ModularOracle::new(vec![1.0; 8]).unwrap());
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    for u in 0..250 {
                        g.marginal(u % 8, &[]);
                    }
                });
            }
        });
        assert_eq!(g.calls(), 1000);
    }
}

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::objectives::{ElementId, RegularizedInstance, Solution, SubmodularOracle};

use super::params::{alpha_of_r, h_of_r, tau_copy_range, ThresholdParams};
use super::threshold::ThresholdState;

/// Threshold streaming without knowing `τ`: keeps one copy for every
/// `τ = (1+ε)^i` in the window `[M/k, (α(r)/r)·M]`, where `M` is the running
/// maximum of `h(r)·g({u}) − r·ℓ_u`.
///
/// Copies are created lazily as the window moves up. A copy whose `τ` is above
/// the window could not have accepted anything seen so far, so starting it late
/// gives the same result as starting it with the stream.
#[derive(Debug, Clone)]
pub struct TauGuess {
    r: f64,
    eps: f64,
    k: usize,
    h: f64,
    alpha: f64,
    running_max: f64,
    copies: BTreeMap<i64, ThresholdState>,
}

impl TauGuess {
    pub fn new(r: f64, eps: f64, k: usize) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("r must be positive, got {r}")));
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::Domain(format!("eps must be positive, got {eps}")));
        }
        if k == 0 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        Ok(Self {
            r,
            eps,
            k,
            h: h_of_r(r)?,
            alpha: alpha_of_r(r)?,
            running_max: f64::NEG_INFINITY,
            copies: BTreeMap::new(),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Running max `M`; `-inf` before the first element.
    pub fn running_max(&self) -> f64 {
        self.running_max
    }

    pub fn copies(&self) -> &BTreeMap<i64, ThresholdState> {
        &self.copies
    }

    /// Elements currently held across all copies.
    pub fn stored_elements(&self) -> usize {
        self.copies.values().map(|c| c.selected().len()).sum()
    }

    /// Processes `u`, querying `g({u})` from the oracle.
    pub fn step<O: SubmodularOracle>(&mut self, u: ElementId, instance: &RegularizedInstance<O>) {
        let singleton = instance.g(&[u]);
        self.step_with_singleton(u, singleton, instance);
    }

    /// Processes `u` given a precomputed `g({u})`, which lets several guessers
    /// over the same stream share one oracle query per element.
    pub fn step_with_singleton<O: SubmodularOracle>(
        &mut self,
        u: ElementId,
        singleton: f64,
        instance: &RegularizedInstance<O>,
    ) {
        let score = self.h * singleton - self.r * instance.cost().of(u);
        if score > self.running_max {
            self.running_max = score;
            self.refresh_copies();
        }
        for copy in self.copies.values_mut() {
            copy.offer(u, instance);
        }
    }

    fn refresh_copies(&mut self) {
        let window = tau_copy_range(self.running_max, self.k, self.r, self.eps)
            .expect("parameters validated in constructor");
        self.copies.retain(|i, _| window.contains(i));
        for i in window {
            self.copies.entry(i).or_insert_with(|| {
                let tau = (1.0 + self.eps).powi(i as i32);
                ThresholdState::new(ThresholdParams {
                    r: self.r,
                    tau,
                    k: self.k,
                    h: self.h,
                    alpha: self.alpha,
                })
            });
        }
    }

    /// Best candidate set over all copies by `f`, without comparing against `∅`.
    /// Ties go to the smallest exponent. Returns `(exponent, f, set)`.
    pub fn best_copy<O: SubmodularOracle>(&self, instance: &RegularizedInstance<O>) -> Option<(i64, f64, Vec<ElementId>)> {
        let mut best: Option<(i64, f64, Vec<ElementId>)> = None;
        for (&i, copy) in &self.copies {
            if copy.selected().is_empty() {
                continue;
            }
            let f = instance.f(copy.selected());
            if best.as_ref().is_none_or(|b| f > b.1) {
                best = Some((i, f, copy.selected().to_vec()));
            }
        }
        best
    }

    /// Best output over all copies, or `∅` if nothing beats it.
    pub fn finish<O: SubmodularOracle>(&self, instance: &RegularizedInstance<O>) -> Solution {
        let empty = instance.solution(Vec::new(), "threshold-streaming empty");
        match self.best_copy(instance) {
            Some((i, f, set)) if f > empty.f_value => instance.solution(
                set,
                format!("threshold-streaming r={} eps={} i={i}", self.r, self.eps),
            ),
            _ => empty,
        }
    }
}

/// Threshold streaming with `τ` guessed on the fly. With `r = 1` this is the
/// golden-ratio variant.
pub fn threshold_streaming<O, I>(stream: I, instance: &RegularizedInstance<O>, r: f64, eps: f64) -> Result<Solution>
where
    O: SubmodularOracle,
    I: IntoIterator<Item = ElementId>,
{
    let mut guess = TauGuess::new(r, eps, instance.k())?;
    for u in stream {
        guess.step(u, instance);
    }
    Ok(guess.finish(instance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{vertex_cover_cost, DiGraph, ModularCost, ModularOracle, VertexCover};
    use crate::streaming::params::copy_count_bound;

    fn triangle(k: usize) -> RegularizedInstance<VertexCover> {
        let graph = DiGraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let cost = vertex_cover_cost(&graph.out_degrees(), 6);
        RegularizedInstance::new(VertexCover::unit_weights(graph), cost, k).unwrap()
    }

    #[test]
    fn non_positive_scores_create_no_copies() {
        let g = ModularOracle::new(vec![1.0]).unwrap();
        let inst = RegularizedInstance::new(&g, ModularCost::new(vec![5.0]).unwrap(), 1).unwrap();
        let mut t = TauGuess::new(1.0, 0.1, 1).unwrap();
        t.step(0, &inst);
        assert!(t.running_max() <= 0.0);
        assert!(t.copies().is_empty());
        assert!(t.finish(&inst).elements.is_empty());
    }

    #[test]
    fn window_matches_copy_range() {
        let inst = triangle(2);
        let mut t = TauGuess::new(1.0, 0.5, 2).unwrap();
        t.step(0, &inst);
        // M = 3h(1) − 1
        let keys: Vec<i64> = t.copies().keys().copied().collect();
        assert_eq!(keys, vec![-6, -5, -4, -3]);
        // Every copy accepted element 0 (gain 0.382 ≥ τ ≤ 0.2963).
        assert!(t.copies().values().all(|c| c.selected() == [0]));
        let out = t.finish(&inst);
        assert_eq!(out.elements, vec![0]);
        assert_eq!(out.f_value, 2.0);
    }

    #[test]
    fn running_max_never_decreases_and_copies_stay_bounded() {
        let graph = DiGraph::from_edges(
            8,
            [(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 6), (5, 7), (6, 0), (7, 1), (2, 5)],
        )
        .unwrap();
        let cost = ModularCost::new(vec![0.3, 0.8, 0.1, 1.2, 0.4, 0.2, 0.9, 0.5]).unwrap();
        let inst = RegularizedInstance::new(VertexCover::unit_weights(graph), cost, 3).unwrap();
        let (r, eps) = (0.5, 0.2);
        let bound = copy_count_bound(3, r, eps).unwrap();
        let mut t = TauGuess::new(r, eps, 3).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for u in [5, 2, 7, 0, 3, 6, 1, 4] {
            t.step(u, &inst);
            assert!(t.running_max() >= prev);
            prev = t.running_max();
            assert!(t.copies().len() as f64 <= bound);
            assert!(t.copies().values().all(|c| c.selected().len() <= 3));
        }
    }

    #[test]
    fn single_positive_element_is_found() {
        let g = ModularOracle::new(vec![4.0]).unwrap();
        let inst = RegularizedInstance::new(&g, ModularCost::new(vec![1.0]).unwrap(), 2).unwrap();
        let out = threshold_streaming([0], &inst, 1.0, 0.1).unwrap();
        assert_eq!(out.elements, vec![0]);
    }
}

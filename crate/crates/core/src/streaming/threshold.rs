use crate::objectives::{ElementId, RegularizedInstance, Solution, SubmodularOracle};

use super::params::ThresholdParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

/// A single pass of the threshold rule with a fixed `τ`:
/// accept `u` iff `g(u | S) − α(r)·ℓ_u ≥ τ` while `|S| < k`.
#[derive(Debug, Clone)]
pub struct ThresholdState {
    params: ThresholdParams,
    selected: Vec<ElementId>,
    g_value: f64,
}

impl ThresholdState {
    pub fn new(params: ThresholdParams) -> Self {
        Self {
            params,
            selected: Vec::with_capacity(params.k),
            g_value: 0.0,
        }
    }

    pub fn params(&self) -> &ThresholdParams {
        &self.params
    }

    /// Accepted elements in acceptance order.
    pub fn selected(&self) -> &[ElementId] {
        &self.selected
    }

    /// `g(S) − g(∅)`, accumulated from the accepted marginals.
    pub fn gain(&self) -> f64 {
        self.g_value
    }

    pub fn is_live(&self) -> bool {
        self.selected.len() < self.params.k
    }

    /// Offers the next stream element. A full copy rejects without touching the oracle.
    pub fn offer<O: SubmodularOracle>(&mut self, u: ElementId, instance: &RegularizedInstance<O>) -> Decision {
        if !self.is_live() {
            return Decision::Reject;
        }
        let gain = instance.oracle().marginal(u, &self.selected);
        if gain - self.params.alpha * instance.cost().of(u) >= self.params.tau {
            self.selected.push(u);
            self.g_value += gain;
            Decision::Accept
        } else {
            Decision::Reject
        }
    }

    /// The better of `S` and `∅`.
    pub fn finish<O: SubmodularOracle>(&self, instance: &RegularizedInstance<O>, provenance: &str) -> Solution {
        let empty = instance.solution(Vec::new(), provenance);
        let sol = instance.solution(self.selected.clone(), provenance);
        if sol.f_value > empty.f_value {
            sol
        } else {
            empty
        }
    }
}

/// Runs one threshold copy over `stream` with an externally supplied `τ`.
pub fn threshold_stream_with_tau<O, I>(
    stream: I,
    instance: &RegularizedInstance<O>,
    r: f64,
    tau: f64,
) -> crate::Result<Solution>
where
    O: SubmodularOracle,
    I: IntoIterator<Item = ElementId>,
{
    let mut state = ThresholdState::new(ThresholdParams::new(r, tau, instance.k())?);
    for u in stream {
        if !state.is_live() {
            break;
        }
        state.offer(u, instance);
    }
    Ok(state.finish(instance, &format!("threshold r={r} tau={tau}")))
}

use crate::error::{Error, Result};
use crate::objectives::{ElementId, RegularizedInstance, Solution, SubmodularOracle};

use super::guess::TauGuess;
use super::params::{zeta_grid, ThresholdParams, ZetaGridEntry};
use super::threshold::ThresholdState;

/// How each grid entry obtains its threshold.
#[derive(Debug, Clone, PartialEq)]
pub enum TauMode {
    /// Geometric guessing of `τ` inside each entry.
    Guessed,
    /// One `τ` per grid entry, in grid order, supplied by the caller.
    Given(Vec<f64>),
}

#[derive(Debug, Clone)]
enum Lane {
    Guessed(TauGuess),
    Given(ThresholdState),
}

/// One-pass streaming over a grid of ratio guesses ζ, each running threshold
/// streaming with the `r` tuned to that ζ. Returns the best set found by any copy.
#[derive(Debug, Clone)]
pub struct DistortedStreaming {
    eps: f64,
    delta: f64,
    lanes: Vec<(ZetaGridEntry, Lane)>,
    guessing: bool,
}

impl DistortedStreaming {
    pub fn new(k: usize, eps: f64, delta: f64, mode: TauMode) -> Result<Self> {
        let grid = zeta_grid(eps, delta)?;
        let guessing = matches!(mode, TauMode::Guessed);
        let lanes = match mode {
            TauMode::Guessed => grid
                .into_iter()
                .map(|e| Ok((e, Lane::Guessed(TauGuess::new(e.r, eps, k)?))))
                .collect::<Result<Vec<_>>>()?,
            TauMode::Given(taus) => {
                if taus.len() != grid.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} thresholds supplied for a grid of {} entries",
                        taus.len(),
                        grid.len()
                    )));
                }
                grid.into_iter()
                    .zip(taus)
                    .map(|(e, tau)| Ok((e, Lane::Given(ThresholdState::new(ThresholdParams::new(e.r, tau, k)?)))))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(Self {
            eps,
            delta,
            lanes,
            guessing,
        })
    }

    pub fn grid(&self) -> impl Iterator<Item = &ZetaGridEntry> {
        self.lanes.iter().map(|(e, _)| e)
    }

    pub fn grid_len(&self) -> usize {
        self.lanes.len()
    }

    /// Threshold copies currently maintained across the grid.
    pub fn copy_count(&self) -> usize {
        self.lanes
            .iter()
            .map(|(_, lane)| match lane {
                Lane::Guessed(g) => g.copies().len(),
                Lane::Given(_) => 1,
            })
            .sum()
    }

    /// Elements held across every copy of every grid entry.
    pub fn stored_elements(&self) -> usize {
        self.lanes
            .iter()
            .map(|(_, lane)| match lane {
                Lane::Guessed(g) => g.stored_elements(),
                Lane::Given(s) => s.selected().len(),
            })
            .sum()
    }

    /// Feeds one stream element to every grid entry, in grid order.
    ///
    /// Costs one `value` query for `g({u})` (guessed mode only) plus at most
    /// one `marginal` query per live copy.
    pub fn process<O: SubmodularOracle>(&mut self, u: ElementId, instance: &RegularizedInstance<O>) {
        let singleton = if self.guessing && !self.lanes.is_empty() {
            instance.g(&[u])
        } else {
            0.0
        };
        for (_, lane) in &mut self.lanes {
            match lane {
                Lane::Guessed(g) => g.step_with_singleton(u, singleton, instance),
                Lane::Given(s) => {
                    s.offer(u, instance);
                }
            }
        }
    }

    pub fn finish<O: SubmodularOracle>(&self, instance: &RegularizedInstance<O>) -> Solution {
        let mut best: Option<(f64, Vec<ElementId>, String)> = None;
        for (entry, lane) in &self.lanes {
            let candidate = match lane {
                Lane::Guessed(g) => g
                    .best_copy(instance)
                    .map(|(i, f, set)| (f, set, format!("zeta={},i={i}", entry.zeta))),
                Lane::Given(s) if !s.selected().is_empty() => Some((
                    instance.f(s.selected()),
                    s.selected().to_vec(),
                    format!("zeta={},tau={}", entry.zeta, s.params().tau),
                )),
                Lane::Given(_) => None,
            };
            if let Some(c) = candidate {
                if best.as_ref().is_none_or(|b| c.0 > b.0) {
                    best = Some(c);
                }
            }
        }
        let tag = format!("distorted-streaming eps={} delta={}", self.eps, self.delta);
        let empty = instance.solution(Vec::new(), format!("{tag} empty"));
        match best {
            Some((f, set, origin)) if f > empty.f_value => instance.solution(set, format!("{tag} {origin}")),
            _ => empty,
        }
    }
}

/// Single pass of distorted streaming over `stream`.
pub fn distorted_stream_run<O, I>(
    stream: I,
    instance: &RegularizedInstance<O>,
    eps: f64,
    delta: f64,
    mode: TauMode,
) -> Result<Solution>
where
    O: SubmodularOracle,
    I: IntoIterator<Item = ElementId>,
{
    let mut run = DistortedStreaming::new(instance.k(), eps, delta, mode)?;
    for u in stream {
        run.process(u, instance);
    }
    Ok(run.finish(instance))
}

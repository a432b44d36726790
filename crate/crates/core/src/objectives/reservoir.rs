use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::ElementId;

/// Uniform fixed-size sample of a stream (Algorithm R).
///
/// After `seen` updates every observed item is in the reservoir with
/// probability `min(1, capacity / seen)`.
#[derive(Debug, Clone)]
pub struct ReservoirEstimator<T> {
    capacity: usize,
    items: Vec<T>,
    seen: u64,
    rng: ChaCha8Rng,
}

impl<T> ReservoirEstimator<T> {
    pub fn new(capacity: usize, seed: u64) -> Self {
        Self {
            capacity,
            items: Vec::with_capacity(capacity),
            seen: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn update(&mut self, item: T) {
        self.seen += 1;
        if self.capacity == 0 {
            return;
        }
        if self.items.len() < self.capacity {
            self.items.push(item);
            return;
        }
        let slot = self.rng.random_range(0..self.seen);
        if (slot as usize) < self.capacity {
            self.items[slot as usize] = item;
        }
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = T>) {
        for item in items {
            self.update(item);
        }
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Estimates `(1/n) Σ_i max_{j∈S} sim(i, j)` by averaging over the sampled
    /// items; the empty max is zero.
    pub fn facility_estimate<F>(&self, similarity: F, set: &[ElementId]) -> Result<f64>
    where
        F: Fn(&T, ElementId) -> f64,
    {
        if self.items.is_empty() {
            return Err(Error::EstimatorNotReady);
        }
        let total: f64 = self
            .items
            .iter()
            .map(|item| set.iter().map(|&j| similarity(item, j)).fold(0.0, f64::max))
            .sum();
        Ok(total / self.items.len() as f64)
    }
}

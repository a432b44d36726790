use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{ElementId, SubmodularOracle};

/// One `(word, element, value)` triple of a sparse score table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub word: usize,
    pub element: ElementId,
    pub value: f64,
}

/// `g(S) = Σ_w sqrt(Σ_{e∈S} score(w, e))`; missing entries score zero.
#[derive(Debug, Clone)]
pub struct SaturatingCoverage {
    n: usize,
    words: usize,
    by_element: Vec<Vec<(usize, f64)>>,
}

impl SaturatingCoverage {
    pub fn new(n: usize, entries: &[ScoreEntry]) -> Result<Self> {
        let mut by_element = vec![Vec::new(); n];
        let mut words = 0;
        for e in entries {
            if !(e.value.is_finite() && e.value >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "score of word {} for element {} is {}; scores must be non-negative",
                    e.word, e.element, e.value
                )));
            }
            if e.element >= n {
                return Err(Error::InvalidInput(format!(
                    "element {} is outside the ground set of size {n}",
                    e.element
                )));
            }
            by_element[e.element].push((e.word, e.value));
            words = words.max(e.word + 1);
        }
        // Repeated (word, element) pairs accumulate.
        for row in &mut by_element {
            row.sort_by_key(|&(w, _)| w);
            row.dedup_by(|next, kept| {
                if next.0 == kept.0 {
                    kept.1 += next.1;
                    true
                } else {
                    false
                }
            });
        }
        Ok(Self {
            n,
            words,
            by_element,
        })
    }

    fn word_sums(&self, set: &[ElementId]) -> Vec<f64> {
        let mut sums = vec![0.0; self.words];
        for &e in set {
            for &(w, v) in &self.by_element[e] {
                sums[w] += v;
            }
        }
        sums
    }
}

impl SubmodularOracle for SaturatingCoverage {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        self.word_sums(set).iter().map(|s| s.sqrt()).sum()
    }

    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        if set.contains(&u) {
            return 0.0;
        }
        let sums = self.word_sums(set);
        self.by_element[u]
            .iter()
            .map(|&(w, v)| (sums[w] + v).sqrt() - sums[w].sqrt())
            .sum()
    }
}

//! Property checks for set functions: sampled checks for oracles of any size
//! and exhaustive checks for small ground sets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::objectives::{ElementId, SubmodularOracle};

/// Largest ground set accepted by the exhaustive checks.
pub const MAX_EXHAUSTIVE_CHECK_N: usize = 12;

/// Outcome of a sampled property check. Violations are `0` when none was seen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyReport {
    pub triples: usize,
    pub empty_value: f64,
    /// Largest `g(u | B) − g(u | A)` over sampled `A ⊆ B`, `u ∉ B`.
    pub submodular_violation: f64,
    /// Largest `−g(u | S)` over the sampled marginals.
    pub monotone_violation: f64,
}

impl PropertyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.empty_value.abs() <= tol && self.submodular_violation <= tol && self.monotone_violation <= tol
    }
}

/// Samples `triples` random `(A ⊆ B, u ∉ B)` and checks diminishing returns,
/// monotonicity and `g(∅) = 0`.
pub fn check_oracle<O: SubmodularOracle + ?Sized>(oracle: &O, triples: usize, seed: u64) -> PropertyReport {
    let n = oracle.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PropertyReport {
        triples: 0,
        empty_value: oracle.value(&[]),
        submodular_violation: 0.0,
        monotone_violation: 0.0,
    };
    if n == 0 {
        return report;
    }
    let mut order: Vec<ElementId> = (0..n).collect();
    for _ in 0..triples {
        order.shuffle(&mut rng);
        let u = order[0];
        let b_len = rng.random_range(0..n);
        let a_len = rng.random_range(0..=b_len);
        let b = &order[1..1 + b_len];
        let a = &b[..a_len];
        let ga = oracle.marginal(u, a);
        let gb = oracle.marginal(u, b);
        report.submodular_violation = report.submodular_violation.max(gb - ga);
        report.monotone_violation = report.monotone_violation.max(-ga).max(-gb);
        report.triples += 1;
    }
    report
}

fn members(mask: usize, n: usize) -> Vec<ElementId> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Values of `f` on every subset, indexed by bitmask.
pub fn tabulate(n: usize, f: impl Fn(&[ElementId]) -> f64) -> Result<Vec<f64>> {
    if n > MAX_EXHAUSTIVE_CHECK_N {
        return Err(Error::TooLarge {
            n,
            limit: MAX_EXHAUSTIVE_CHECK_N,
        });
    }
    Ok((0..1usize << n).map(|mask| f(&members(mask, n))).collect())
}

/// `f(S) + f(S∪{u,v}) − f(S∪{u}) − f(S∪{v})`, reading `−∞ ≤ x` as satisfied.
fn pair_excess(table: &[f64], s: usize, u: usize, v: usize) -> f64 {
    let lhs = table[s] + table[s | 1 << u | 1 << v];
    if lhs == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    lhs - (table[s | 1 << u] + table[s | 1 << v])
}

/// Largest pairwise excess over every `S` and `u ≠ v ∉ S`. A set function is
/// submodular iff this is `≤ 0` and γ-weakly submodular iff it is `≤ γ`.
/// Returns `−∞` when there is no such triple.
pub fn max_pair_excess(n: usize, table: &[f64]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for s in 0..table.len() {
        for u in (0..n).filter(|&u| s >> u & 1 == 0) {
            for v in (u + 1..n).filter(|&v| s >> v & 1 == 0) {
                worst = worst.max(pair_excess(table, s, u, v));
            }
        }
    }
    worst
}

/// Largest `f(S) − f(S∪{u})` over every `S` and `u ∉ S`; `−∞` if `n = 0`.
pub fn max_monotone_drop(n: usize, table: &[f64]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for s in 0..table.len() {
        for u in (0..n).filter(|&u| s >> u & 1 == 0) {
            let (a, b) = (table[s], table[s | 1 << u]);
            if a == f64::NEG_INFINITY {
                continue;
            }
            worst = worst.max(a - b);
        }
    }
    worst
}

/// Pairwise excess of `(S, u, v)` triples drawn at random, for ground sets too
/// large to enumerate.
pub fn sampled_pair_excess(n: usize, f: impl Fn(&[ElementId]) -> f64, triples: usize, seed: u64) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    if n < 2 {
        return worst;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<ElementId> = (0..n).collect();
    for _ in 0..triples {
        order.shuffle(&mut rng);
        let (u, v) = (order[0], order[1]);
        let len = rng.random_range(0..=n - 2);
        let s = order[2..2 + len].to_vec();
        let with = |extra: &[ElementId]| {
            let mut t = s.clone();
            t.extend_from_slice(extra);
            f(&t)
        };
        let lhs = f(&s) + with(&[u, v]);
        if lhs == f64::NEG_INFINITY {
            continue;
        }
        worst = worst.max(lhs - with(&[u]) - with(&[v]));
    }
    worst
}

//! Comparison algorithms and exhaustive search.
//!
//! Exhaustive search is the ground truth used by the guarantee tests; it is
//! guarded to ground sets of at most [`MAX_EXHAUSTIVE_N`] elements.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::objectives::{ElementId, RegularizedInstance, Solution, SubmodularOracle};

pub const MAX_EXHAUSTIVE_N: usize = 20;

/// Weights of the benchmark `a·g(T) − b·ℓ(T)` over `|T| ≤ k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkTarget {
    pub a: f64,
    pub b: f64,
    pub k: usize,
}

/// Exhaustive maximizer together with its `g` and `ℓ` parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Exhaustive {
    pub elements: Vec<ElementId>,
    pub value: f64,
    pub g_value: f64,
    pub ell_value: f64,
}

/// Exact `argmax_{|T| ≤ k} a·g(T) − b·ℓ(T)`.
///
/// Subsets are visited in lexicographic order of their sorted element lists,
/// so the returned maximizer is the lexicographically smallest one.
pub fn brute_force_distorted<O: SubmodularOracle>(
    instance: &RegularizedInstance<O>,
    target: BenchmarkTarget,
) -> Result<Exhaustive> {
    let n = instance.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge {
            n,
            limit: MAX_EXHAUSTIVE_N,
        });
    }
    if target.a.is_nan() || target.a < 0.0 {
        return Err(Error::Domain(format!("benchmark weight a must be non-negative, got {}", target.a)));
    }
    let g0 = instance.g(&[]);
    let mut best = Exhaustive {
        elements: Vec::new(),
        value: target.a * g0,
        g_value: g0,
        ell_value: 0.0,
    };
    let mut current = Vec::with_capacity(target.k);
    visit(instance, target, 0, 0.0, &mut current, &mut best);
    Ok(best)
}

fn visit<O: SubmodularOracle>(
    instance: &RegularizedInstance<O>,
    target: BenchmarkTarget,
    start: usize,
    ell: f64,
    current: &mut Vec<ElementId>,
    best: &mut Exhaustive,
) {
    if current.len() == target.k {
        return;
    }
    for u in start..instance.n() {
        current.push(u);
        let ell_u = ell + instance.cost().of(u);
        let g = instance.g(current);
        let value = target.a * g - target.b * ell_u;
        if value > best.value {
            *best = Exhaustive {
                elements: current.clone(),
                value,
                g_value: g,
                ell_value: ell_u,
            };
        }
        visit(instance, target, u + 1, ell_u, current, best);
        current.pop();
    }
}

/// Exact optimum of `g − ℓ` under the instance budget.
pub fn brute_force_opt<O: SubmodularOracle>(instance: &RegularizedInstance<O>) -> Result<Exhaustive> {
    brute_force_distorted(
        instance,
        BenchmarkTarget {
            a: 1.0,
            b: 1.0,
            k: instance.k(),
        },
    )
}

/// Classic greedy on `f`: repeatedly add the element with the largest
/// `g(u | S) − ℓ_u` while that gain is positive. Smallest id wins ties.
pub fn vanilla_greedy<O: SubmodularOracle>(instance: &RegularizedInstance<O>) -> Solution {
    let n = instance.n();
    let mut selected: Vec<ElementId> = Vec::with_capacity(instance.k());
    let mut taken = vec![false; n];
    for _ in 0..instance.k() {
        let mut best: Option<(ElementId, f64)> = None;
        for u in (0..n).filter(|&u| !taken[u]) {
            let gain = instance.oracle().marginal(u, &selected) - instance.cost().of(u);
            if best.is_none_or(|(_, b)| gain > b) {
                best = Some((u, gain));
            }
        }
        match best {
            Some((u, gain)) if gain > 0.0 => {
                selected.push(u);
                taken[u] = true;
            }
            // Gains only shrink as S grows, so no later round can do better.
            _ => break,
        }
    }
    instance.solution(selected, "greedy")
}

#[derive(Debug, Clone)]
struct Sieve {
    selected: Vec<ElementId>,
    f_gain: f64,
}

/// Sieve-streaming applied to `f = g − ℓ`.
///
/// Keeps one candidate set per guess `v = (1+ε)^i` of the optimum inside
/// `[m, 2k·m]`, `m` being the largest positive singleton `f` seen so far, and
/// admits `u` into the set for `v` when its `f`-gain is at least
/// `(v/2 − f(S_v)) / (k − |S_v|)`.
pub fn sieve_streaming<O, I>(stream: I, instance: &RegularizedInstance<O>, eps: f64) -> Result<Solution>
where
    O: SubmodularOracle,
    I: IntoIterator<Item = ElementId>,
{
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let k = instance.k();
    let base = eps.ln_1p();
    let mut best_singleton = 0.0f64;
    let mut sieves: BTreeMap<i64, Sieve> = BTreeMap::new();

    for u in stream {
        let single = instance.oracle().marginal(u, &[]) - instance.cost().of(u);
        if single > best_singleton {
            best_singleton = single;
            let lo = ((best_singleton.ln() / base) - 1e-9).ceil() as i64;
            let hi = (((2.0 * k as f64 * best_singleton).ln() / base) + 1e-9).floor() as i64;
            sieves.retain(|i, _| *i >= lo);
            for i in lo..=hi {
                sieves.entry(i).or_insert_with(|| Sieve {
                    selected: Vec::with_capacity(k),
                    f_gain: 0.0,
                });
            }
        }
        for (&i, sieve) in sieves.iter_mut() {
            if sieve.selected.len() >= k {
                continue;
            }
            let v = (1.0 + eps).powi(i as i32);
            let gain = instance.oracle().marginal(u, &sieve.selected) - instance.cost().of(u);
            let needed = (v / 2.0 - sieve.f_gain) / (k - sieve.selected.len()) as f64;
            if gain >= needed {
                sieve.selected.push(u);
                sieve.f_gain += gain;
            }
        }
    }

    let empty = instance.solution(Vec::new(), "sieve empty");
    let mut best: Option<(f64, &Vec<ElementId>, i64)> = None;
    for (&i, sieve) in &sieves {
        if sieve.selected.is_empty() {
            continue;
        }
        let f = instance.f(&sieve.selected);
        if best.is_none_or(|b| f > b.0) {
            best = Some((f, &sieve.selected, i));
        }
    }
    Ok(match best {
        Some((f, set, i)) if f > empty.f_value => instance.solution(set.clone(), format!("sieve eps={eps} i={i}")),
        _ => empty,
    })
}

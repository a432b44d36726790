#![allow(dead_code)]

use regsub::{ElementId, RegularizedInstance, SubmodularOracle};

/// Best `a·g(T) − b·ℓ(T)` over `|T| ≤ k`, by plain bitmask enumeration.
/// Returns `(set, value, g, ℓ)`; the empty set is included.
pub fn enumerate_best<O: SubmodularOracle>(
    inst: &RegularizedInstance<O>,
    a: f64,
    b: f64,
    k: usize,
) -> (Vec<ElementId>, f64, f64, f64) {
    let n = inst.n();
    assert!(n <= 20, "enumeration is for small ground sets");
    let mut best = (Vec::new(), f64::NEG_INFINITY, 0.0, 0.0);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize > k {
            continue;
        }
        let set: Vec<ElementId> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let g = inst.g(&set);
        let l = inst.ell(&set);
        let v = a * g - b * l;
        if v > best.1 {
            best = (set, v, g, l);
        }
    }
    best
}

/// `(set, f, g, ℓ)` of an optimal set of `g − ℓ` under the instance budget.
pub fn optimum<O: SubmodularOracle>(inst: &RegularizedInstance<O>) -> (Vec<ElementId>, f64, f64, f64) {
    enumerate_best(inst, 1.0, 1.0, inst.k())
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

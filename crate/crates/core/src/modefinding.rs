//! Mode finding for weakly submodular set functions.
//!
//! A set function `ρ` is γ-additively weak submodular when
//! `ρ(S) + ρ(S∪{u,v}) ≤ γ + ρ(S∪{u}) + ρ(S∪{v})` for every `S` and `u ≠ v ∉ S`.
//! Subtracting `(γ/2)|S|(|S|−1)` makes it submodular (`Λ`), and adding back a
//! modular `ℓ` makes it monotone (`g = Λ + ℓ`). Maximizing `g − ℓ` is then a
//! regularized problem any algorithm of this crate can solve.

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal};

use crate::error::{Error, Result};
use crate::objectives::{DenseMatrix, ElementId, ModularCost, RegularizedInstance, SubmodularOracle};
use crate::validate::{max_pair_excess, sampled_pair_excess, tabulate, MAX_EXHAUSTIVE_CHECK_N};

/// A real-valued set function, not necessarily submodular or finite.
pub trait SetFunction: Send + Sync {
    fn n(&self) -> usize;
    fn value(&self, set: &[ElementId]) -> f64;
}

impl<T: SetFunction + ?Sized> SetFunction for &T {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn value(&self, set: &[ElementId]) -> f64 {
        (**self).value(set)
    }
}

impl<T: SetFunction + ?Sized> SetFunction for Arc<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn value(&self, set: &[ElementId]) -> f64 {
        (**self).value(set)
    }
}

/// Set function stored as a table over bitmasks: entry `m` is the value of
/// `{i : bit i of m is set}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSetFunction {
    n: usize,
    values: Vec<f64>,
}

impl TableSetFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n >= usize::BITS as usize || values.len() != 1usize << n {
            return Err(Error::InvalidInput(format!(
                "a table over {n} elements needs 2^{n} entries, got {}",
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl SetFunction for TableSetFunction {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        let mask = set.iter().fold(0usize, |m, &u| m | 1 << u);
        self.values[mask]
    }
}

/// `ρ` together with its additive slack `γ`.
///
/// If `ρ(∅) < 0` the instance works with `ρ − ρ(∅)` internally; `offset`
/// records the shift so reported values can be mapped back.
#[derive(Debug, Clone)]
pub struct WeakSubmodularInstance<R> {
    rho: R,
    gamma: f64,
    offset: f64,
}

impl<R: SetFunction> WeakSubmodularInstance<R> {
    pub fn new(rho: R, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::Domain(format!("gamma must be non-negative, got {gamma}")));
        }
        let empty = rho.value(&[]);
        if !empty.is_finite() {
            return Err(Error::Domain(format!("rho(empty) must be finite, got {empty}")));
        }
        Ok(Self {
            rho,
            gamma,
            offset: empty.min(0.0),
        })
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Amount subtracted from `ρ`; `0` unless `ρ(∅) < 0`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn rho(&self) -> &R {
        &self.rho
    }

    /// Unshifted `ρ(S)`.
    pub fn rho_value(&self, set: &[ElementId]) -> f64 {
        self.rho.value(set)
    }

    fn shifted(&self, set: &[ElementId]) -> f64 {
        self.rho.value(set) - self.offset
    }

    /// `Λ(S) = ρ(S) − (γ/2)|S|(|S|−1)`.
    pub fn lambda_value(&self, set: &[ElementId]) -> f64 {
        let s = set.len() as f64;
        self.rho.value(set) - 0.5 * self.gamma * s * (s - 1.0)
    }

    /// `ℓ_u = max{Λ(N∖u) − Λ(N), 0}`, evaluated both directly and through
    /// `ρ(N∖u) − ρ(N) + γ(|N|−1)`. Returns `(direct, closed_form)`.
    pub fn derived_cost_forms(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.n();
        let full: Vec<ElementId> = (0..n).collect();
        let rho_full = self.rho.value(&full);
        let lambda_full = self.lambda_value(&full);
        if !rho_full.is_finite() {
            return Err(Error::Domain(format!("rho(N) must be finite, got {rho_full}")));
        }
        let mut direct = Vec::with_capacity(n);
        let mut closed = Vec::with_capacity(n);
        for u in 0..n {
            let rest: Vec<ElementId> = full.iter().copied().filter(|&v| v != u).collect();
            let rho_rest = self.rho.value(&rest);
            if !rho_rest.is_finite() {
                return Err(Error::Domain(format!("rho(N minus {u}) must be finite, got {rho_rest}")));
            }
            direct.push((self.lambda_value(&rest) - lambda_full).max(0.0));
            closed.push((rho_rest - rho_full + self.gamma * (n as f64 - 1.0)).max(0.0));
        }
        Ok((direct, closed))
    }

    pub fn derived_cost(&self) -> Result<ModularCost> {
        ModularCost::new(self.derived_cost_forms()?.1)
    }
}

/// `g = Λ + ℓ` built from a shifted `ρ`; monotone and submodular whenever
/// `ρ` is γ-additively weak submodular.
#[derive(Debug, Clone)]
pub struct SurrogateOracle<R> {
    inst: WeakSubmodularInstance<R>,
    ell: Vec<f64>,
}

impl<R: SetFunction> SurrogateOracle<R> {
    pub fn instance(&self) -> &WeakSubmodularInstance<R> {
        &self.inst
    }

    /// `Λ(S)` on the shifted `ρ`.
    pub fn lambda(&self, set: &[ElementId]) -> f64 {
        self.inst.lambda_value(set) - self.inst.offset
    }
}

impl<R: SetFunction> SubmodularOracle for SurrogateOracle<R> {
    fn n(&self) -> usize {
        self.inst.n()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        let s = set.len() as f64;
        let ell: f64 = set.iter().map(|&u| self.ell[u]).sum();
        self.inst.shifted(set) - 0.5 * self.inst.gamma * s * (s - 1.0) + ell
    }
}

/// Regularized instance `(g = Λ + ℓ, ℓ)` with budget `k`. Its `f = g − ℓ` is
/// `Λ` on the shifted `ρ`.
pub fn surrogate_instance<R: SetFunction>(
    inst: WeakSubmodularInstance<R>,
    k: usize,
) -> Result<RegularizedInstance<SurrogateOracle<R>>> {
    let cost = inst.derived_cost()?;
    let ell = cost.as_slice().to_vec();
    RegularizedInstance::new(SurrogateOracle { inst, ell }, cost, k)
}

/// Result of a γ-weakness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCheck {
    pub holds: bool,
    /// Largest `ρ(S) + ρ(S∪{u,v}) − ρ(S∪{u}) − ρ(S∪{v}) − γ` seen; `−∞` when
    /// no triple exists.
    pub max_violation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every `(S, u, v)`; refuses ground sets above 12 elements.
    Exhaustive,
    Sampled { triples: usize, seed: u64 },
}

/// Tests the γ-weakness inequality with slack `1e-9`.
pub fn check_gamma_weak<R: SetFunction>(rho: &R, gamma: f64, mode: CheckMode) -> Result<WeakCheck> {
    let n = rho.n();
    let excess = match mode {
        CheckMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_CHECK_N {
                return Err(Error::TooLarge {
                    n,
                    limit: MAX_EXHAUSTIVE_CHECK_N,
                });
            }
            max_pair_excess(n, &tabulate(n, |s| rho.value(s))?)
        }
        CheckMode::Sampled { triples, seed } => sampled_pair_excess(n, |s| rho.value(s), triples, seed),
    };
    let max_violation = excess - gamma;
    Ok(WeakCheck {
        holds: max_violation <= 1e-9,
        max_violation,
    })
}

/// Smallest `γ ≥ 0` for which `ρ` is γ-additively weak submodular, by enumeration.
pub fn min_gamma<R: SetFunction>(rho: &R) -> Result<f64> {
    let n = rho.n();
    Ok(max_pair_excess(n, &tabulate(n, |s| rho.value(s))?).max(0.0))
}

/// `ρ(S) = ½·log det(L_S)` restricted to `|S| ≤ d`, the log-density of a
/// strongly log-concave distribution up to its normalizing constant.
#[derive(Debug, Clone)]
pub struct SlcInstance {
    l: Arc<DenseMatrix>,
    d: usize,
}

impl SlcInstance {
    pub fn new(l: DenseMatrix, d: usize) -> Result<Self> {
        if !l.is_square() {
            return Err(Error::InvalidInput("SLC kernel must be square".into()));
        }
        let min = l.symmetric_eigenvalues()?.first().copied().unwrap_or(0.0);
        if min < -1e-9 {
            return Err(Error::InvalidInput(format!(
                "SLC kernel must be PSD, smallest eigenvalue is {min}"
            )));
        }
        Ok(Self { l: Arc::new(l), d })
    }

    pub fn kernel(&self) -> &DenseMatrix {
        &self.l
    }

    pub fn support_cap(&self) -> usize {
        self.d
    }
}

/// `½·log det(L_S)`, `0` for `∅`, and `−∞` when `|S| > d` or `L_S` is singular.
pub fn slc_log_density(inst: &SlcInstance, set: &[ElementId]) -> f64 {
    if set.len() > inst.d {
        return f64::NEG_INFINITY;
    }
    if set.is_empty() {
        return 0.0;
    }
    match Cholesky::new(inst.l.principal(set)) {
        Some(chol) => chol.l().diagonal().iter().map(|x| x.ln()).sum(),
        None => f64::NEG_INFINITY,
    }
}

impl SetFunction for SlcInstance {
    fn n(&self) -> usize {
        self.l.rows()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        slc_log_density(self, set)
    }
}

/// A generated SLC kernel with everything needed to replay it.
#[derive(Debug, Clone)]
pub struct SlcSample {
    pub matrix: DenseMatrix,
    /// Sampled eigenvalues, ascending.
    pub spectrum: Vec<f64>,
    pub mu: f64,
    pub sigma: f64,
    pub seed: u64,
}

/// `L = Q·D·Qᵀ` with `Q` Haar-orthogonal and `D` i.i.d. log-normal(μ, σ).
pub fn sample_slc_matrix(n: usize, mu: f64, sigma: f64, seed: u64) -> Result<SlcSample> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    if !mu.is_finite() {
        return Err(Error::Domain(format!("mu must be finite, got {mu}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
    let qr = gauss.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Sign-fixing the columns makes Q uniformly distributed.
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let lognormal = LogNormal::new(mu, sigma).map_err(|e| Error::Domain(e.to_string()))?;
    let d: Vec<f64> = (0..n).map(|_| lognormal.sample(&mut rng)).collect();
    let mut l = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&d)) * q.transpose();
    // Remove rounding asymmetry.
    let lt = l.transpose();
    l = (l + lt) * 0.5;
    let mut spectrum = d;
    spectrum.sort_by(f64::total_cmp);
    Ok(SlcSample {
        matrix: DenseMatrix::from_nalgebra(&l),
        spectrum,
        mu,
        sigma,
        seed,
    })
}

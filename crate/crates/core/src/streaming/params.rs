//! Closed-form coefficients of the threshold rule and the ζ ↔ β ↔ r maps.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// Distance under which a log-ratio is snapped to the nearest integer before
/// taking floor/ceil, so that exact powers do not flap across a boundary.
const SNAP: f64 = 1e-9;

fn snapped(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= SNAP {
        r
    } else {
        x
    }
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("r must be a finite non-negative number, got {r}")))
    }
}

/// `h(r) = (2r + 1 − √(4r² + 1)) / 2`.
///
/// Evaluated in the rationalized form `2r / (2r + 1 + √(4r² + 1))`, which is
/// algebraically identical and free of cancellation for small `r`.
pub fn h_of_r(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(2.0 * r / (2.0 * r + 1.0 + (4.0 * r * r + 1.0).sqrt()))
}

/// `α(r) = (2r + 1 + √(4r² + 1)) / 2`; satisfies `α(r)·h(r) = r`.
pub fn alpha_of_r(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok((2.0 * r + 1.0 + (4.0 * r * r + 1.0).sqrt()) / 2.0)
}

/// `β = 4ζ / (1 − 2ζ)²` for `ζ ∈ (0, 1/2)`.
pub fn beta_from_zeta(zeta: f64) -> Result<f64> {
    if !(zeta > 0.0 && zeta < 0.5) {
        return Err(Error::Domain(format!("zeta must lie in (0, 1/2), got {zeta}")));
    }
    let d = 1.0 - 2.0 * zeta;
    Ok(4.0 * zeta / (d * d))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("beta must be positive, got {beta}")))
    }
}

/// `r = β / (2√(1 + 2β))`, the threshold parameter tuned to a utility/cost ratio β.
pub fn r_from_beta(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(beta / (2.0 * (1.0 + 2.0 * beta).sqrt()))
}

/// `ζ(β) = (1 + β − √(1 + 2β)) / (2β)`, the ratio achieved with `r = r_from_beta(β)`.
///
/// Computed as `β / (2(1 + β + √(1 + 2β)))`, the same value without the
/// cancellation in the numerator.
pub fn approx_ratio_zeta(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(beta / (2.0 * (1.0 + beta + (1.0 + 2.0 * beta).sqrt())))
}

/// Parameters of one threshold copy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdParams {
    pub r: f64,
    pub tau: f64,
    pub k: usize,
    pub h: f64,
    pub alpha: f64,
}

impl ThresholdParams {
    pub fn new(r: f64, tau: f64, k: usize) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("r must be positive, got {r}")));
        }
        if !tau.is_finite() {
            return Err(Error::Domain(format!("tau must be finite, got {tau}")));
        }
        if k == 0 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        Ok(Self {
            r,
            tau,
            k,
            h: h_of_r(r)?,
            alpha: alpha_of_r(r)?,
        })
    }
}

/// One guess ζ of the achievable ratio with its derived β and r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaGridEntry {
    pub zeta: f64,
    pub beta: f64,
    pub r: f64,
}

impl ZetaGridEntry {
    pub fn new(zeta: f64) -> Result<Self> {
        let beta = beta_from_zeta(zeta)?;
        Ok(Self {
            zeta,
            beta,
            r: r_from_beta(beta)?,
        })
    }
}

/// Geometric grid `{ε(1+δ)^i : 0 ≤ i ≤ ⌊log_{1+δ}(1/(2ε))⌋}` restricted to ζ < 1/2.
pub fn zeta_grid(eps: f64, delta: f64) -> Result<Vec<ZetaGridEntry>> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Domain(format!("eps must lie in (0, 1/2], got {eps}")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let top = snapped((1.0 / (2.0 * eps)).ln() / delta.ln_1p()).floor() as i32;
    (0..=top)
        .map(|i| eps * (1.0 + delta).powi(i))
        .take_while(|&zeta| zeta < 0.5)
        .map(ZetaGridEntry::new)
        .collect()
}

/// Exponents `i` with `M/k ≤ (1+ε)^i ≤ (α(r)/r)·M`; empty when `M ≤ 0`.
pub fn tau_copy_range(m: f64, k: usize, r: f64, eps: f64) -> Result<RangeInclusive<i64>> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if !(r.is_finite() && r > 0.0) || k == 0 {
        return Err(Error::Domain(format!("need r > 0 and k >= 1, got r = {r}, k = {k}")));
    }
    if m.is_nan() || m <= 0.0 || m.is_infinite() {
        return Ok(RangeInclusive::new(1, 0));
    }
    let base = eps.ln_1p();
    let lo = snapped((m / k as f64).ln() / base).ceil() as i64;
    let hi = snapped((m * alpha_of_r(r)? / r).ln() / base).floor() as i64;
    Ok(lo..=hi)
}

/// Upper bound `2 + log_{1+ε}(k·α(r)/r)` on the number of simultaneously
/// maintained threshold copies.
pub fn copy_count_bound(k: usize, r: f64, eps: f64) -> Result<f64> {
    Ok(2.0 + (k as f64 * alpha_of_r(r)? / r).ln() / eps.ln_1p())
}

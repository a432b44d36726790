use std::sync::Arc;

use crate::error::{Error, Result};

use super::{DenseMatrix, ElementId, SubmodularOracle};

/// Distance used inside `M_ij = exp(−dist(x_i, x_j))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Euclidean,
    /// Euclidean distance divided by a positive length scale.
    ScaledEuclidean(f64),
}

impl Metric {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let d = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        match *self {
            Metric::Euclidean => d,
            Metric::ScaledEuclidean(scale) => d / scale,
        }
    }
}

/// Pairwise similarity `M_ij = exp(−dist(x_i, x_j))` of the rows of `features`.
pub fn similarity_from_features(features: &DenseMatrix, metric: Metric) -> Result<DenseMatrix> {
    if let Metric::ScaledEuclidean(scale) = metric {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidInput(format!("length scale must be positive, got {scale}")));
        }
    }
    let n = features.rows();
    for i in 0..n {
        if let Some(j) = features.row(i).iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "feature ({i}, {j}) is not finite"
            )));
        }
    }
    let mut m = DenseMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            let s = (-metric.distance(features.row(i), features.row(j))).exp();
            m.set(i, j, s);
            m.set(j, i, s);
        }
    }
    Ok(m)
}

fn check_similarity(m: &DenseMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!(
            "similarity matrix must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    for i in 0..m.rows() {
        if let Some(j) = m.row(i).iter().position(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidInput(format!(
                "similarity ({i}, {j}) = {} lies outside [0, 1]",
                m.get(i, j)
            )));
        }
    }
    Ok(())
}

/// `g(S) = (1/n) Σ_i max_{j∈S} M_ij` with the empty max taken as 0.
#[derive(Debug, Clone)]
pub struct FacilityLocation {
    m: Arc<DenseMatrix>,
}

impl FacilityLocation {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        Self::shared(Arc::new(m))
    }

    pub fn shared(m: Arc<DenseMatrix>) -> Result<Self> {
        check_similarity(&m)?;
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Arc<DenseMatrix> {
        &self.m
    }
}

fn row_max(m: &DenseMatrix, i: usize, set: &[ElementId]) -> f64 {
    set.iter().map(|&j| m.get(i, j)).fold(0.0, f64::max)
}

fn rows_value(m: &DenseMatrix, rows: impl Iterator<Item = usize>, count: usize, set: &[ElementId]) -> f64 {
    if count == 0 {
        return 0.0;
    }
    rows.map(|i| row_max(m, i, set)).sum::<f64>() / count as f64
}

fn rows_marginal(
    m: &DenseMatrix,
    rows: impl Iterator<Item = usize>,
    count: usize,
    u: ElementId,
    set: &[ElementId],
) -> f64 {
    if count == 0 || set.contains(&u) {
        return 0.0;
    }
    rows.map(|i| (m.get(i, u) - row_max(m, i, set)).max(0.0))
        .sum::<f64>()
        / count as f64
}

impl SubmodularOracle for FacilityLocation {
    fn n(&self) -> usize {
        self.m.cols()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        rows_value(&self.m, 0..self.m.rows(), self.m.rows(), set)
    }

    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        rows_marginal(&self.m, 0..self.m.rows(), self.m.rows(), u, set)
    }
}

/// Facility location evaluated on a sample of rows, e.g. the contents of a
/// [`ReservoirEstimator`](super::ReservoirEstimator).
///
/// Averaging over a uniform row sample gives an unbiased estimate of
/// [`FacilityLocation`] for every fixed `S`, and the estimate is itself a
/// normalized monotone submodular function.
#[derive(Debug, Clone)]
pub struct SampledFacilityLocation {
    m: Arc<DenseMatrix>,
    rows: Vec<usize>,
}

impl SampledFacilityLocation {
    pub fn new(m: Arc<DenseMatrix>, rows: Vec<usize>) -> Result<Self> {
        check_similarity(&m)?;
        if rows.is_empty() {
            return Err(Error::EstimatorNotReady);
        }
        if let Some(i) = rows.iter().find(|&&i| i >= m.rows()) {
            return Err(Error::InvalidInput(format!("sampled row {i} is out of range")));
        }
        Ok(Self { m, rows })
    }
}

impl SubmodularOracle for SampledFacilityLocation {
    fn n(&self) -> usize {
        self.m.cols()
    }

    fn value(&self, set: &[ElementId]) -> f64 {
        rows_value(&self.m, self.rows.iter().copied(), self.rows.len(), set)
    }

    fn marginal(&self, u: ElementId, set: &[ElementId]) -> f64 {
        rows_marginal(&self.m, self.rows.iter().copied(), self.rows.len(), u, set)
    }
}

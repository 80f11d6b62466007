use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{center_columns, covariance, sorted_eigen};
use crate::error::{Error, Result};
use crate::seqdist::CostMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PcaResult {
    /// d×k, unit-norm columns.
    pub loadings: DMatrix<f64>,
    /// n×k projections of the (centered, optionally standardized) rows.
    pub scores: DMatrix<f64>,
    /// Share of total variance per retained component.
    pub explained_fraction: DVector<f64>,
    /// Variance along each retained component.
    pub variances: DVector<f64>,
    pub means: DVector<f64>,
    /// Column scales used for standardization (all 1 when not standardized).
    pub scales: DVector<f64>,
}

impl PcaResult {
    pub fn n_components(&self) -> usize {
        self.loadings.ncols()
    }

    /// Projects new rows with the stored centering and scaling.
    pub fn transform(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.ncols() != self.means.len() {
            return Err(Error::DimensionMismatch { expected: self.means.len(), got: x.ncols() });
        }
        let mut z = x.clone();
        for (j, mut col) in z.column_iter_mut().enumerate() {
            col.add_scalar_mut(-self.means[j]);
            col /= self.scales[j];
        }
        Ok(z * &self.loadings)
    }
}

/// PCA via eigen-decomposition of the covariance matrix, or of the
/// correlation matrix when `standardize` is set.
///
/// Each loading column is signed so that its largest-magnitude entry is positive.
pub fn pca(x: &DMatrix<f64>, k: usize, standardize: bool) -> Result<PcaResult> {
    let (n, d) = x.shape();
    if n < 2 {
        return Err(Error::InvalidInput(format!("PCA needs at least 2 rows, got {n}")));
    }
    if k == 0 || k > (n - 1).min(d) {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must be in 1..={} for a {n}×{d} matrix",
            (n - 1).min(d)
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("PCA input contains non-finite values".into()));
    }

    let (mut z, means) = center_columns(x);
    let mut scales = DVector::from_element(d, 1.0);
    if standardize {
        for (j, mut col) in z.column_iter_mut().enumerate() {
            let sd = (col.norm_squared() / (n as f64 - 1.0)).sqrt();
            if sd <= 1e-12 * (1.0 + means[j].abs()) {
                return Err(Error::ZeroVariance(j));
            }
            col /= sd;
            scales[j] = sd;
        }
    }

    let cov = covariance(&z);
    let total = cov.trace();
    if total <= 0.0 {
        return Err(Error::Numeric("zero total variance".into()));
    }
    let (values, vectors) = sorted_eigen(&cov);

    let mut loadings = vectors.columns(0, k).into_owned();
    for mut col in loadings.column_iter_mut() {
        let pivot = col.iter().cloned().fold(0.0_f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
    let variances = DVector::from_iterator(k, values.iter().take(k).map(|&v| v.max(0.0)));
    let explained_fraction = &variances / total;
    let scores = &z * &loadings;
    Ok(PcaResult { loadings, scores, explained_fraction, variances, means, scales })
}

/// PCA of a substitution-cost matrix with amino acids (rows) as observations
/// and substitution targets (columns) as variables.
pub fn components_of_cost_matrix(s: &CostMatrix, k: usize, standardize: bool) -> Result<PcaResult> {
    pca(&s.to_dmatrix(), k, standardize)
}

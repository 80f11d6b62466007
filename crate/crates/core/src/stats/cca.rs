use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{center_columns, correlation, covariance, inverse_sqrt};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CcaOptions {
    /// Ridge added to each within-block covariance as `factor * trace / dim`.
    pub ridge_factor: f64,
}

impl Default for CcaOptions {
    fn default() -> Self {
        CcaOptions { ridge_factor: 1e-8 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CcaResult {
    /// Canonical correlations, non-increasing.
    pub correlations: Vec<f64>,
    /// p×m weights for the X block.
    pub x_weights: DMatrix<f64>,
    /// q×m weights for the Y block.
    pub y_weights: DMatrix<f64>,
    /// n×m canonical variate scores.
    pub x_scores: DMatrix<f64>,
    pub y_scores: DMatrix<f64>,
    /// Correlation of each X variable with each X variate (p×m).
    pub x_structure: DMatrix<f64>,
    /// Correlation of each Y variable with each Y variate (q×m).
    pub y_structure: DMatrix<f64>,
}

fn ridged(mut cov: DMatrix<f64>, factor: f64) -> DMatrix<f64> {
    let dim = cov.nrows() as f64;
    let lambda = factor * cov.trace() / dim;
    for i in 0..cov.nrows() {
        cov[(i, i)] += lambda;
    }
    cov
}

/// Canonical correlation analysis of two row-aligned blocks.
///
/// Directions come from the SVD of `Sxx^{-1/2} Sxy Syy^{-1/2}`; the reported
/// correlation of each pair is the sample correlation of its two variates,
/// which keeps the ridge from biasing the values themselves.
pub fn cca(x: &DMatrix<f64>, y: &DMatrix<f64>, opts: CcaOptions) -> Result<CcaResult> {
    let n = x.nrows();
    if y.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y.nrows() });
    }
    let (p, q) = (x.ncols(), y.ncols());
    if n < 2 || p == 0 || q == 0 {
        return Err(Error::InvalidInput(format!("CCA needs n >= 2 and non-empty blocks ({n}×{p}, {n}×{q})")));
    }
    if n <= p + q {
        log::warn!("CCA with n = {n} <= p + q = {}; estimates will be unstable", p + q);
    }
    let (xc, _) = center_columns(x);
    let (yc, _) = center_columns(y);
    let denom = n as f64 - 1.0;
    let sxx = ridged(covariance(&xc), opts.ridge_factor);
    let syy = ridged(covariance(&yc), opts.ridge_factor);
    let sxy = xc.transpose() * &yc / denom;

    let wx = inverse_sqrt(&sxx)?;
    let wy = inverse_sqrt(&syy)?;
    let m = &wx * sxy * &wy;
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));
    let dims = p.min(q);
    order.truncate(dims);

    let mut x_weights = DMatrix::zeros(p, dims);
    let mut y_weights = DMatrix::zeros(q, dims);
    for (c, &i) in order.iter().enumerate() {
        x_weights.set_column(c, &(&wx * u.column(i)));
        y_weights.set_column(c, &(&wy * vt.row(i).transpose()));
    }
    let x_scores = &xc * &x_weights;
    let mut y_scores = &yc * &y_weights;

    let mut correlations = Vec::with_capacity(dims);
    for c in 0..dims {
        let r = correlation(x_scores.column(c).as_slice(), y_scores.column(c).as_slice());
        if r < 0.0 {
            y_weights.column_mut(c).neg_mut();
            y_scores.column_mut(c).neg_mut();
        }
        correlations.push(r.abs());
    }
    // the SVD ordering and the direct correlations can disagree at rounding level
    for i in 1..correlations.len() {
        if correlations[i] > correlations[i - 1] {
            correlations[i] = correlations[i - 1];
        }
    }

    let structure = |data: &DMatrix<f64>, scores: &DMatrix<f64>| {
        DMatrix::from_fn(data.ncols(), dims, |j, c| {
            correlation(data.column(j).as_slice(), scores.column(c).as_slice())
        })
    };
    let x_structure = structure(&xc, &x_scores);
    let y_structure = structure(&yc, &y_scores);

    Ok(CcaResult { correlations, x_weights, y_weights, x_scores, y_scores, x_structure, y_structure })
}

/// Permutation p-values for each canonical correlation: rows of `y` are
/// shuffled `shuffles` times and the observed value compared against the
/// permuted ones, `p = (1 + #{perm >= obs}) / (1 + shuffles)`.
pub fn cca_permutation_test(
    x: &DMatrix<f64>,
    y: &DMatrix<f64>,
    opts: CcaOptions,
    shuffles: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let observed = cca(x, y, opts)?.correlations;
    let n = y.nrows();
    let exceed: Vec<Vec<bool>> = (0..shuffles)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64));
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let yp = DMatrix::from_fn(n, y.ncols(), |i, j| y[(perm[i], j)]);
            let r = cca(x, &yp, opts)?.correlations;
            Ok(observed.iter().zip(&r).map(|(o, p)| p >= o).collect())
        })
        .collect::<Result<_>>()?;
    let counts = DVector::from_iterator(
        observed.len(),
        (0..observed.len()).map(|i| exceed.iter().filter(|e| e[i]).count() as f64),
    );
    Ok(counts.iter().map(|c| (1.0 + c) / (1.0 + shuffles as f64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, cols: usize, seed: u64) -> DMatrix<f64> {
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, cols, |_, _| StandardNormal.sample(&mut rng))
    }

    #[test]
    fn identical_blocks_correlate_perfectly() {
        let x = sample(200, 3, 1);
        let r = cca(&x, &x, CcaOptions::default()).unwrap();
        for c in &r.correlations {
            assert!((c - 1.0).abs() < 1e-8, "{c}");
        }
    }

    #[test]
    fn row_mismatch() {
        let err = cca(&sample(10, 2, 1), &sample(9, 2, 2), CcaOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn structure_correlations_in_range() {
        let x = sample(100, 3, 3);
        let y = sample(100, 4, 4);
        let r = cca(&x, &y, CcaOptions::default()).unwrap();
        assert_eq!(r.correlations.len(), 3);
        assert!(r.x_structure.iter().chain(r.y_structure.iter()).all(|v| v.abs() <= 1.0));
        assert!(r.correlations.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn constant_block_is_rejected() {
        let x = sample(20, 2, 5);
        let y = DMatrix::from_element(20, 2, 3.0);
        assert!(cca(&x, &y, CcaOptions::default()).is_err());
    }

    #[test]
    fn permutation_test_separates_signal_from_noise() {
        let x = sample(150, 2, 6);
        let noise = sample(150, 2, 7);
        let y = DMatrix::from_fn(150, 2, |i, j| if j == 0 { x[(i, 0)] + 0.5 * noise[(i, 0)] } else { noise[(i, 1)] });
        let p = cca_permutation_test(&x, &y, CcaOptions::default(), 99, 11).unwrap();
        assert!(p[0] <= 0.02, "{p:?}");
        let p_again = cca_permutation_test(&x, &y, CcaOptions::default(), 99, 11).unwrap();
        assert_eq!(p, p_again);
    }
}

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{DistanceMatrix, KernelMatrix};
use crate::error::{Error, Result};
use crate::seqdist::{distances_to, CostScheme, Pattern};

/// Training statistics of the squared distances, kept for out-of-sample rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centering {
    /// Mean of each row of `D∘D`.
    pub row_means: Vec<f64>,
    /// Mean of all entries of `D∘D`.
    pub grand_mean: f64,
}

impl Centering {
    pub fn fit(d: &DistanceMatrix) -> Result<Self> {
        let n = d.len();
        if n < 2 {
            return Err(Error::InvalidInput(format!("double centering needs n >= 2, got {n}")));
        }
        let row_means: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| d.get(i, j).powi(2)).sum::<f64>() / n as f64)
            .collect();
        let grand_mean = row_means.iter().sum::<f64>() / n as f64;
        Ok(Centering { row_means, grand_mean })
    }

    pub fn len(&self) -> usize {
        self.row_means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_means.is_empty()
    }

    /// Kernel values of a new pattern against the training set, given its
    /// distances `d` to the training patterns:
    ///
    /// `k_i = -1/2 (d_i² - mean_j d_j² - r_i + g)`
    ///
    /// with `r_i` the training row means and `g` the grand mean of `D∘D`.
    /// For a training pattern this reproduces its column of the training kernel.
    pub fn kernel_row(&self, d: &[f64]) -> Result<Vec<f64>> {
        let m = self.row_means.len();
        if m == 0 {
            return Err(Error::InvalidInput("empty training set".into()));
        }
        if d.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: d.len() });
        }
        let sq: Vec<f64> = d.iter().map(|v| v * v).collect();
        let test_mean = sq.iter().sum::<f64>() / m as f64;
        Ok(sq
            .iter()
            .zip(&self.row_means)
            .map(|(s, r)| -0.5 * (s - test_mean - r + self.grand_mean))
            .collect())
    }
}

/// `K = -1/2 C (D∘D) C` with `C = I - 11ᵀ/n`.
pub fn center_to_kernel(d: &DistanceMatrix) -> Result<KernelMatrix> {
    Ok(center_with_stats(d)?.0)
}

pub fn center_with_stats(d: &DistanceMatrix) -> Result<(KernelMatrix, Centering)> {
    let c = Centering::fit(d)?;
    let n = d.len();
    let mut k = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            k.push(-0.5 * (d.get(i, j).powi(2) - c.row_means[i] - c.row_means[j] + c.grand_mean));
        }
    }
    Ok((KernelMatrix::from_row_major(n, k)?, c))
}

/// Out-of-sample kernel row of `test` against `train` under `scheme`.
pub fn kernel_row(test: &Pattern, train: &[Pattern], scheme: &CostScheme, centering: &Centering) -> Result<Vec<f64>> {
    if train.is_empty() {
        return Err(Error::InvalidInput("empty training set".into()));
    }
    let d = distances_to(test, train, scheme)?;
    centering.kernel_row(&d)
}

/// `K_ij = exp(-‖x_i - x_j‖² / (2σ²))` over the rows of `x`.
pub fn gaussian_kernel(x: &DMatrix<f64>, sigma: f64) -> Result<KernelMatrix> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("Gaussian bandwidth must be > 0, got {sigma}")));
    }
    let n = x.nrows();
    let mut data = vec![1.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = gaussian(x.row(i).iter(), x.row(j).iter(), sigma);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    let mut k = KernelMatrix::from_row_major(n, data)?;
    k.is_psd = true;
    Ok(k)
}

/// Gaussian kernel values of `probe` against each row of `x`.
pub fn gaussian_row(probe: &[f64], x: &DMatrix<f64>, sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("Gaussian bandwidth must be > 0, got {sigma}")));
    }
    if probe.len() != x.ncols() {
        return Err(Error::DimensionMismatch { expected: x.ncols(), got: probe.len() });
    }
    Ok(x.row_iter().map(|r| gaussian(probe.iter(), r.iter(), sigma)).collect())
}

fn gaussian<'a>(a: impl Iterator<Item = &'a f64>, b: impl Iterator<Item = &'a f64>, sigma: f64) -> f64 {
    let sq: f64 = a.zip(b).map(|(u, v)| (u - v) * (u - v)).sum();
    (-sq / (2.0 * sigma * sigma)).exp()
}

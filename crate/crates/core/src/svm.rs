//! Binary C-SVM on a precomputed kernel matrix.
//!
//! The dual `min ½ αᵀQα - eᵀα` s.t. `0 <= α_i <= C_i`, `yᵀα = 0`, with
//! `Q_ij = y_i y_j K_ij`, is solved two variables at a time, choosing the
//! maximal violating pair each step. On indefinite kernels the pair curvature
//! is floored at `1e-12`, which keeps every step finite; such runs usually end
//! at the iteration cap and are flagged.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::datamodel::Label;
use crate::error::{Error, Result};
use crate::kernel::KernelMatrix;

const CURVATURE_FLOOR: f64 = 1e-12;
/// Multipliers above this are support vectors.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    /// Stop when the maximal KKT violation drops below this.
    pub tol: f64,
    /// Pair-update cap; `None` means `10⁴ · n`.
    pub max_iter: Option<usize>,
    /// Multipliers on `C` for the positive (soluble) and negative classes.
    pub class_weights: (f64, f64),
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams { c: 2.0, tol: 1e-3, max_iter: None, class_weights: (1.0, 1.0) }
    }
}

impl SvmParams {
    pub fn with_c(c: f64) -> Self {
        SvmParams { c, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub support: Vec<usize>,
    /// `α_i y_i` for each support index.
    pub coefficients: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub n_train: usize,
    pub kernel_fingerprint: String,
    pub converged: bool,
    /// Set when the run ended at the iteration cap.
    pub non_convergent: bool,
    /// Set when some pair had non-positive curvature.
    pub indefinite: bool,
    pub iterations: usize,
    /// `eᵀα - ½αᵀQα` at the returned iterate.
    pub dual_objective: f64,
    /// Dual objective after every `n` pair updates.
    #[serde(skip)]
    pub objective_trace: Vec<f64>,
    /// Full multiplier vector (training order).
    #[serde(skip)]
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: f64,
    pub score: f64,
}

pub fn train(k: &KernelMatrix, y: &[f64], params: &SvmParams) -> Result<SvmModel> {
    let n = k.len();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y.len() });
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("SVM training needs at least 2 patterns, got {n}")));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidInput("labels must be +1 or -1".into()));
    }
    if y.iter().all(|&v| v == y[0]) {
        return Err(Error::InvalidInput("training labels contain a single class".into()));
    }
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(Error::InvalidParameter(format!("C must be > 0, got {}", params.c)));
    }
    let (wp, wn) = params.class_weights;
    if !(wp > 0.0 && wn > 0.0) {
        return Err(Error::InvalidParameter("class weights must be > 0".into()));
    }
    let upper: Vec<f64> = y.iter().map(|&v| if v > 0.0 { params.c * wp } else { params.c * wn }).collect();
    let max_iter = params.max_iter.unwrap_or(10_000 * n);

    let mut alpha = vec![0.0; n];
    // G = Qα - e
    let mut grad = vec![-1.0; n];
    let q = |i: usize, j: usize| y[i] * y[j] * k.get(i, j);
    let objective = |alpha: &[f64], grad: &[f64]| -0.5 * alpha.iter().zip(grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>();

    let mut iterations = 0;
    let mut converged = false;
    let mut indefinite = false;
    let mut trace = vec![0.0];
    let mut best = (0.0, alpha.clone(), grad.clone());

    while iterations < max_iter {
        let Some((i, j, gap)) = select_pair(&alpha, &grad, y, &upper) else {
            converged = true;
            break;
        };
        if gap < params.tol {
            converged = true;
            break;
        }
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let (ci, cj) = (upper[i], upper[j]);
        let mut curv = k.get(i, i) + k.get(j, j) - 2.0 * k.get(i, j);
        if curv <= 0.0 {
            indefinite = true;
            curv = CURVATURE_FLOOR;
        }

        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / curv;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > ci - cj {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j] = ci - diff;
                }
            } else if alpha[j] > cj {
                alpha[j] = cj;
                alpha[i] = cj + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / curv;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > ci {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j] = sum - ci;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > cj {
                if alpha[j] > cj {
                    alpha[j] = cj;
                    alpha[i] = sum - cj;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q(t, i) * di + q(t, j) * dj;
        }
        iterations += 1;
        if iterations % n == 0 {
            let obj = objective(&alpha, &grad);
            trace.push(obj);
            if obj > best.0 {
                best = (obj, alpha.clone(), grad.clone());
            }
        }
    }

    let final_obj = objective(&alpha, &grad);
    if !converged && best.0 > final_obj {
        alpha = best.1;
        grad = best.2;
    }
    if !converged {
        log::warn!("SVM solver stopped at the iteration cap ({max_iter}) without meeting tol {}", params.tol);
    }
    trace.push(objective(&alpha, &grad));

    let rho = compute_rho(&alpha, &grad, y, &upper);
    let support: Vec<usize> = (0..n).filter(|&i| alpha[i] > SUPPORT_THRESHOLD).collect();
    let coefficients = support.iter().map(|&i| alpha[i] * y[i]).collect();
    Ok(SvmModel {
        support,
        coefficients,
        bias: -rho,
        c: params.c,
        n_train: n,
        kernel_fingerprint: k.fingerprint(),
        converged,
        non_convergent: !converged,
        indefinite,
        iterations,
        dual_objective: objective(&alpha, &grad),
        objective_trace: trace,
        alpha,
    })
}

/// Maximal violating pair `(i, j, m - M)`, or `None` when one index set is empty.
fn select_pair(alpha: &[f64], grad: &[f64], y: &[f64], upper: &[f64]) -> Option<(usize, usize, f64)> {
    let mut up = (f64::NEG_INFINITY, None);
    let mut low = (f64::INFINITY, None);
    for t in 0..alpha.len() {
        let v = -y[t] * grad[t];
        let in_up = (y[t] > 0.0 && alpha[t] < upper[t]) || (y[t] < 0.0 && alpha[t] > 0.0);
        let in_low = (y[t] < 0.0 && alpha[t] < upper[t]) || (y[t] > 0.0 && alpha[t] > 0.0);
        if in_up && v > up.0 {
            up = (v, Some(t));
        }
        if in_low && v < low.0 {
            low = (v, Some(t));
        }
    }
    Some((up.1?, low.1?, up.0 - low.0))
}

fn compute_rho(alpha: &[f64], grad: &[f64], y: &[f64], upper: &[f64]) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= upper[t] {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (ub + lb) / 2.0
    }
}

impl SvmModel {
    pub fn decision(&self, k_row: &[f64]) -> Result<f64> {
        if k_row.len() != self.n_train {
            return Err(Error::DimensionMismatch { expected: self.n_train, got: k_row.len() });
        }
        Ok(self.support.iter().zip(&self.coefficients).map(|(&i, c)| c * k_row[i]).sum::<f64>() + self.bias)
    }

    /// Score and ±1 label; a score of exactly 0 maps to +1.
    pub fn predict(&self, k_row: &[f64]) -> Result<Prediction> {
        let score = self.decision(k_row)?;
        Ok(Prediction { label: if score >= 0.0 { 1.0 } else { -1.0 }, score })
    }

    pub fn to_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn from_json<R: Read>(r: R) -> Result<Self> {
        Ok(serde_json::from_reader(r)?)
    }
}

/// Per-class and global test errors, shaped like a results-table row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub insoluble_errors: usize,
    pub insoluble_total: usize,
    pub soluble_errors: usize,
    pub soluble_total: usize,
    pub insoluble_rate: f64,
    pub soluble_rate: f64,
    pub global_rate: f64,
}

impl ErrorReport {
    pub fn from_counts(ins_err: usize, ins_total: usize, sol_err: usize, sol_total: usize) -> Result<Self> {
        let total = ins_total + sol_total;
        if total == 0 {
            return Err(Error::InvalidInput("empty test set".into()));
        }
        let rate = |e: usize, t: usize| if t == 0 { 0.0 } else { e as f64 / t as f64 };
        Ok(ErrorReport {
            insoluble_errors: ins_err,
            insoluble_total: ins_total,
            soluble_errors: sol_err,
            soluble_total: sol_total,
            insoluble_rate: rate(ins_err, ins_total),
            soluble_rate: rate(sol_err, sol_total),
            global_rate: (ins_err + sol_err) as f64 / total as f64,
        })
    }

    /// Tallies predicted against true ±1 labels (soluble = +1).
    pub fn from_predictions(predicted: &[f64], truth: &[f64]) -> Result<Self> {
        if predicted.len() != truth.len() {
            return Err(Error::DimensionMismatch { expected: truth.len(), got: predicted.len() });
        }
        let (mut ie, mut it, mut se, mut st) = (0, 0, 0, 0);
        for (&p, &t) in predicted.iter().zip(truth) {
            match Label::from_sign(t) {
                Label::Soluble => {
                    st += 1;
                    se += usize::from(p < 0.0);
                }
                _ => {
                    it += 1;
                    ie += usize::from(p >= 0.0);
                }
            }
        }
        ErrorReport::from_counts(ie, it, se, st)
    }

    pub fn accuracy(&self) -> f64 {
        1.0 - self.global_rate
    }

    pub fn balanced_accuracy(&self) -> f64 {
        1.0 - 0.5 * (self.insoluble_rate + self.soluble_rate)
    }
}

pub fn evaluate(model: &SvmModel, rows: &[Vec<f64>], labels: &[f64]) -> Result<ErrorReport> {
    if rows.is_empty() {
        return Err(Error::InvalidInput("empty test set".into()));
    }
    if rows.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: rows.len(), got: labels.len() });
    }
    let predicted: Vec<f64> = rows.iter().map(|r| model.predict(r).map(|p| p.label)).collect::<Result<_>>()?;
    ErrorReport::from_predictions(&predicted, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::gaussian_kernel;
    use nalgebra::DMatrix;

    fn linear_kernel(x: &DMatrix<f64>) -> KernelMatrix {
        let g = x * x.transpose();
        KernelMatrix::from_row_major(x.nrows(), g.transpose().as_slice().to_vec()).unwrap()
    }

    #[test]
    fn separable_points() {
        let x = DMatrix::from_row_slice(6, 2, &[0.0, 0.0, 0.5, 0.2, 0.1, 0.6, 3.0, 3.0, 3.4, 2.8, 2.9, 3.5]);
        let y = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0];
        let k = linear_kernel(&x);
        let m = train(&k, &y, &SvmParams::with_c(10.0)).unwrap();
        assert!(m.converged);
        for i in 0..6 {
            assert_eq!(m.predict(k.row(i)).unwrap().label, y[i]);
        }
        let s: f64 = m.coefficients.iter().sum();
        assert!(s.abs() < 1e-8);
    }

    #[test]
    fn xor_with_gaussian_kernel() {
        let x = DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        let y = [1.0, 1.0, -1.0, -1.0];
        let k = gaussian_kernel(&x, 1.0).unwrap();
        let m = train(&k, &y, &SvmParams { c: 10.0, tol: 1e-10, ..Default::default() }).unwrap();
        for i in 0..4 {
            assert_eq!(m.predict(k.row(i)).unwrap().label, y[i]);
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let k = KernelMatrix::from_row_major(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(train(&k, &[1.0, 1.0], &SvmParams::default()).is_err());
        assert!(train(&k, &[1.0], &SvmParams::default()).is_err());
        assert!(train(&k, &[1.0, 0.5], &SvmParams::default()).is_err());
        let k1 = KernelMatrix::from_row_major(1, vec![1.0]).unwrap();
        assert!(train(&k1, &[1.0], &SvmParams::default()).is_err());
    }

    #[test]
    fn zero_row_gives_bias_sign() {
        let k = KernelMatrix::from_row_major(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let m = train(&k, &[1.0, -1.0], &SvmParams::default()).unwrap();
        let p = m.predict(&[0.0, 0.0]).unwrap();
        assert_eq!(p.score, m.bias);
        assert_eq!(p.label, if m.bias >= 0.0 { 1.0 } else { -1.0 });
        assert!(m.predict(&[0.0]).is_err());
    }

    #[test]
    fn indefinite_kernel_terminates() {
        let k = KernelMatrix::from_row_major(3, vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0]).unwrap();
        let m = train(&k, &[1.0, -1.0, 1.0], &SvmParams { max_iter: Some(500), ..Default::default() }).unwrap();
        assert!(m.indefinite);
        assert!(m.alpha.iter().all(|&a| (0.0..=2.0).contains(&a)));
        let eq: f64 = m.alpha.iter().zip([1.0, -1.0, 1.0]).map(|(a, y)| a * y).sum();
        assert!(eq.abs() < 1e-8);
    }

    #[test]
    fn error_report_rates() {
        let r = ErrorReport::from_counts(232, 1521, 33, 110).unwrap();
        assert!((r.insoluble_rate - 0.1525).abs() < 1e-4);
        assert!((r.soluble_rate - 0.3).abs() < 1e-12);
        assert!((r.global_rate - 0.1624).abs() < 1e-4);
        assert!(ErrorReport::from_counts(0, 0, 0, 0).is_err());
    }

    #[test]
    fn perfect_and_all_wrong() {
        let truth = [1.0, -1.0, -1.0];
        let ok = ErrorReport::from_predictions(&truth, &truth).unwrap();
        assert_eq!((ok.insoluble_rate, ok.soluble_rate, ok.global_rate), (0.0, 0.0, 0.0));
        let wrong = ErrorReport::from_predictions(&[-1.0, 1.0, 1.0], &truth).unwrap();
        assert_eq!((wrong.insoluble_rate, wrong.soluble_rate, wrong.global_rate), (1.0, 1.0, 1.0));
    }

    #[test]
    fn model_json_round_trip() {
        let k = KernelMatrix::from_row_major(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let m = train(&k, &[1.0, -1.0], &SvmParams::default()).unwrap();
        let mut buf = Vec::new();
        m.to_json(&mut buf).unwrap();
        let back = SvmModel::from_json(buf.as_slice()).unwrap();
        assert_eq!(back.support, m.support);
        assert_eq!(back.predict(&[0.3, 0.1]).unwrap(), m.predict(&[0.3, 0.1]).unwrap());
    }
}

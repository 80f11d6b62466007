use crate::error::{Error, Result};

/// Order-2 Rényi entropy `-ln Σ π_i²`, optionally divided by `ln n` so that it
/// lies in `[0, 1]` (1 exactly for the uniform distribution).
///
/// A single-state distribution has zero entropy in both forms.
pub fn renyi2_entropy(pi: &[f64], normalize: bool) -> Result<f64> {
    if pi.is_empty() {
        return Err(Error::InvalidProbability(0.0));
    }
    let sum: f64 = pi.iter().sum();
    if pi.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbability(sum));
    }
    let collision: f64 = pi.iter().map(|p| p * p).sum();
    let h = -collision.ln();
    if !normalize {
        return Ok(h.max(0.0));
    }
    let n = pi.len();
    if n == 1 {
        return Ok(0.0);
    }
    Ok((h / (n as f64).ln()).clamp(0.0, 1.0))
}

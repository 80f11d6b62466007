use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::LabeledGraph;
use crate::error::{Error, Result};

/// How edge attributes enter the random walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EdgeWeighting {
    /// Plain adjacency, `W = A`.
    Unweighted,
    /// Raw CA–CA distances as weights.
    #[default]
    Distance,
    /// `1 / distance`, so closer contacts weigh more.
    InverseDistance,
}

impl EdgeWeighting {
    pub fn weight(self, w: f64) -> f64 {
        match self {
            EdgeWeighting::Unweighted => 1.0,
            EdgeWeighting::Distance => w,
            EdgeWeighting::InverseDistance => 1.0 / w,
        }
    }
}

/// `T = D⁻¹W` together with the (weighted) degrees and the stationary distribution.
#[derive(Debug, Clone)]
pub struct TransitionView {
    pub transition: DMatrix<f64>,
    pub degrees: Vec<f64>,
    pub stationary: Vec<f64>,
}

pub(crate) fn weight_matrix(g: &LabeledGraph, weighting: EdgeWeighting) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(g.n, g.n);
    for &(i, j, e) in &g.edges {
        let v = weighting.weight(e);
        w[(i, j)] = v;
        w[(j, i)] = v;
    }
    w
}

/// Degree-proportional stationary distribution `π_i = D_ii / Σ_k D_kk`.
pub fn stationary_distribution(g: &LabeledGraph, weighting: EdgeWeighting) -> Result<Vec<f64>> {
    if g.edges.is_empty() {
        return Err(Error::InvalidInput("stationary distribution needs at least one edge".into()));
    }
    let mut deg = vec![0.0; g.n];
    for &(i, j, e) in &g.edges {
        let v = weighting.weight(e);
        deg[i] += v;
        deg[j] += v;
    }
    let total: f64 = deg.iter().sum();
    Ok(deg.iter().map(|d| d / total).collect())
}

pub fn transition_view(g: &LabeledGraph, weighting: EdgeWeighting) -> Result<TransitionView> {
    if g.edges.is_empty() {
        return Err(Error::InvalidInput("transition view needs at least one edge".into()));
    }
    let w = weight_matrix(g, weighting);
    let degrees: Vec<f64> = w.row_iter().map(|r| r.sum()).collect();
    if let Some(v) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::IsolatedVertex(v));
    }
    let mut transition = w;
    for (i, mut row) in transition.row_iter_mut().enumerate() {
        row /= degrees[i];
    }
    let stationary = stationary_distribution(g, weighting)?;
    Ok(TransitionView { transition, degrees, stationary })
}

//! Spectral seriation of a labeled graph into a sequence of vertex attributes.
//!
//! The walk matrix `T = D⁻¹W` is not symmetric, so the leading eigenvector is
//! taken from the similar matrix `M = D^{-1/2} W D^{-1/2}`. If `Mu = u` then
//! `D^{1/2}u` is the left eigenvector of `T` for eigenvalue 1, i.e. the
//! stationary distribution, which orders the vertices. Disconnected graphs are
//! seriated component by component, largest component first.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::transition::{weight_matrix, EdgeWeighting};
use super::LabeledGraph;
use crate::error::Result;
use crate::stats::sorted_eigen;

/// Entries closer than this (relative to the largest) count as ties.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seriation {
    /// Vertex indices in emission order.
    pub order: Vec<usize>,
    /// Vertex attributes in emission order.
    pub elements: Vec<[f64; 3]>,
    /// Per-vertex leading-eigenvector entries (non-negative, summing to 1 within each component).
    pub weights: Vec<f64>,
    /// Number of connected components; > 1 means the component-wise fallback was used.
    pub components: usize,
}

impl Seriation {
    pub fn disconnected(&self) -> bool {
        self.components > 1
    }
}

pub fn seriate(g: &LabeledGraph, weighting: EdgeWeighting) -> Result<Seriation> {
    let full_w = weight_matrix(g, weighting);
    let comps = g.components();
    let mut weights = vec![0.0; g.n];
    let mut order = Vec::with_capacity(g.n);

    for comp in &comps {
        if comp.len() == 1 {
            weights[comp[0]] = 1.0;
            order.push(comp[0]);
            continue;
        }
        let m = comp.len();
        let w = DMatrix::from_fn(m, m, |a, b| full_w[(comp[a], comp[b])]);
        let v = leading_vector(&w);
        for (a, &vertex) in comp.iter().enumerate() {
            weights[vertex] = v[a];
        }
        order.extend(order_by_weight(comp, &v));
    }

    let elements = order.iter().map(|&v| g.vertex_attrs[v]).collect();
    Ok(Seriation { order, elements, weights, components: comps.len() })
}

/// Leading eigenvector of `D^{-1/2} W D^{-1/2}` mapped back by `D^{1/2}`,
/// sign-fixed and scaled to sum 1.
fn leading_vector(w: &DMatrix<f64>) -> Vec<f64> {
    let deg: Vec<f64> = w.row_iter().map(|r| r.sum()).collect();
    let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let m = DMatrix::from_fn(w.nrows(), w.ncols(), |i, j| inv_sqrt[i] * w[(i, j)] * inv_sqrt[j]);
    let (_, vectors) = sorted_eigen(&m);
    let u = vectors.column(0);
    let mut v: Vec<f64> = u.iter().zip(&deg).map(|(x, d)| x * d.sqrt()).collect();
    let total: f64 = v.iter().sum();
    let sign = if total < 0.0 { -1.0 } else { 1.0 };
    for x in &mut v {
        *x = (*x * sign).max(0.0);
    }
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= total);
    v
}

/// Descending by weight; runs of values within the tie tolerance of the run's
/// first value are emitted in vertex-index order.
fn order_by_weight(vertices: &[usize], weights: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vertices.len()).collect();
    idx.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(vertices[a].cmp(&vertices[b])));
    let scale = weights.iter().cloned().fold(0.0_f64, f64::max);
    let tol = TIE_TOLERANCE * scale;
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let head = weights[idx[start]];
        let mut end = start + 1;
        while end < idx.len() && head - weights[idx[end]] <= tol {
            end += 1;
        }
        let mut run: Vec<usize> = idx[start..end].iter().map(|&a| vertices[a]).collect();
        run.sort_unstable();
        out.extend(run);
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn attrs(n: usize) -> Vec<[f64; 3]> {
        (0..n).map(|i| [i as f64, 0.0, 0.0]).collect()
    }

    #[test]
    fn star_hub_first() {
        let mut g = LabeledGraph::from_edges(5, &[(3, 0), (3, 1), (3, 2), (3, 4)]).unwrap();
        g.vertex_attrs = attrs(5);
        let s = seriate(&g, EdgeWeighting::Unweighted).unwrap();
        assert_eq!(s.order, vec![3, 0, 1, 2, 4]);
        assert_eq!(s.elements[0], [3.0, 0.0, 0.0]);
        assert!((s.weights[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn regular_graph_keeps_index_order() {
        let edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).chain((0..8).map(|i| (i, (i + 4) % 8)).filter(|e| e.0 < e.1)).collect();
        let g = LabeledGraph::from_edges(8, &edges).unwrap();
        let s = seriate(&g, EdgeWeighting::Unweighted).unwrap();
        assert_eq!(s.order, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn disconnected_components_in_size_order() {
        let g = LabeledGraph::from_edges(6, &[(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap();
        let s = seriate(&g, EdgeWeighting::Unweighted).unwrap();
        assert_eq!(s.components, 3);
        assert!(s.disconnected());
        assert_eq!(s.order, vec![2, 3, 4, 0, 1, 5]);
    }

    #[test]
    fn weights_are_non_negative() {
        let g = LabeledGraph::new(attrs(4), vec![(0, 1, 5.0), (1, 2, 6.5), (2, 3, 4.2), (0, 3, 7.9)]).unwrap();
        let s = seriate(&g, EdgeWeighting::Distance).unwrap();
        assert!(s.weights.iter().all(|&w| w >= 0.0));
        assert!((s.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

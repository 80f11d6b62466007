use std::io::{Read, Write};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default contact window in Å (both bounds exclusive).
pub const DEFAULT_R_MIN: f64 = 4.0;
pub const DEFAULT_R_MAX: f64 = 8.0;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Undirected graph with a 3-vector on every vertex and a positive real on every edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub n: usize,
    pub vertex_attrs: Vec<[f64; 3]>,
    /// `(i, j, w)` with `i < j`, sorted, no duplicates.
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl LabeledGraph {
    pub fn new(vertex_attrs: Vec<[f64; 3]>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = vertex_attrs.len();
        let mut norm = Vec::with_capacity(edges.len());
        for (i, j, w) in edges {
            if i == j {
                return Err(Error::InvalidInput(format!("self loop on vertex {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("edge ({i}, {j}) out of range for {n} vertices")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidInput(format!("edge ({i}, {j}) weight {w} must be positive")));
            }
            norm.push((i.min(j), i.max(j), w));
        }
        norm.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        if norm.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidInput("duplicate edge".into()));
        }
        Ok(LabeledGraph { n, vertex_attrs, edges: norm, provenance: Provenance::default() })
    }

    /// Graph with unit edge weights and zero vertex attributes; handy for topology-only work.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        LabeledGraph::new(vec![[0.0; 3]; n], edges.iter().map(|&(i, j)| (i, j, 1.0)).collect())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbour lists with edge weights, each sorted by neighbour index.
    pub fn neighbors(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j, w) in &self.edges {
            adj[i].push((j, w));
            adj[j].push((i, w));
        }
        for l in &mut adj {
            l.sort_by_key(|&(v, _)| v);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(i, j, _) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    /// Binary adjacency matrix, row-major.
    pub fn adjacency(&self) -> Vec<u8> {
        let mut a = vec![0u8; self.n * self.n];
        for &(i, j, _) in &self.edges {
            a[i * self.n + j] = 1;
            a[j * self.n + i] = 1;
        }
        a
    }

    /// Connected components, largest first; equal sizes ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(u, _) in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: perm.len() });
        }
        let mut attrs = vec![[0.0; 3]; self.n];
        for (old, &new) in perm.iter().enumerate() {
            attrs[new] = self.vertex_attrs[old];
        }
        let edges = self.edges.iter().map(|&(i, j, w)| (perm[i], perm[j], w)).collect();
        let mut g = LabeledGraph::new(attrs, edges)?;
        g.provenance = self.provenance.clone();
        Ok(g)
    }

    pub fn to_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, self)?;
        Ok(())
    }

    pub fn from_json<R: Read>(r: R) -> Result<Self> {
        let raw: LabeledGraph = serde_json::from_reader(r)?;
        if raw.n != raw.vertex_attrs.len() {
            return Err(Error::InvalidInput(format!(
                "graph declares n = {} but has {} vertex attribute rows",
                raw.n,
                raw.vertex_attrs.len()
            )));
        }
        let mut g = LabeledGraph::new(raw.vertex_attrs, raw.edges)?;
        g.provenance = raw.provenance;
        Ok(g)
    }
}

/// Contact graph: an edge joins residues whose CA–CA distance lies strictly
/// inside `(r_min, r_max)`, weighted by that distance. Vertex attributes are
/// the per-residue component scores.
pub fn build_contact_graph(
    positions: &[[f64; 3]],
    scores: &[[f64; 3]],
    r_min: f64,
    r_max: f64,
) -> Result<LabeledGraph> {
    if positions.len() < 2 {
        return Err(Error::InvalidInput(format!("contact graph needs at least 2 residues, got {}", positions.len())));
    }
    if scores.len() != positions.len() {
        return Err(Error::DimensionMismatch { expected: positions.len(), got: scores.len() });
    }
    if !(0.0..r_max).contains(&r_min) {
        return Err(Error::InvalidParameter(format!("need 0 <= r_min < r_max, got ({r_min}, {r_max})")));
    }
    if positions.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("non-finite coordinate".into()));
    }
    let n = positions.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclid(&positions[i], &positions[j]);
            if d > r_min && d < r_max {
                edges.push((i, j, d));
            }
        }
    }
    let mut g = LabeledGraph::new(scores.to_vec(), edges)?;
    g.provenance.r_min = Some(r_min);
    g.provenance.r_max = Some(r_max);
    if g.edges.is_empty() {
        warn!("contact graph with {n} residues has no edges");
        g.provenance.warnings.push("no edges".into());
    }
    Ok(g)
}

pub(crate) fn euclid(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

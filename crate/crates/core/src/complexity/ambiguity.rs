//! Graph ambiguity: the minimum fuzzy entropy over fuzzified vertex partitions.
//!
//! A partition is fuzzified block by block. For a vertex `v` in block `C`
//!
//! * `α_C(v) = deg_C(v) / deg(v)`, the share of `v`'s edges that stay in `C`,
//! * `β_C(v) = deg_C(v) / max_{u∈C} deg_C(u)`, within-block degree centrality
//!   (1 for singleton blocks, 0 when the block has no internal edges),
//!
//! and `μ_C(v) = α_C(v) β_C(v)`, with `μ_C(v) = 0` outside `C`. The block
//! memberships are joined with a t-conorm, and the ambiguity of the partition
//! is the normalized De Luca–Termini entropy of the result.
//!
//! The search ranges over *admissible* partitions: every block induces a
//! connected subgraph with at least two vertices, and isolated vertices form
//! their own singleton blocks. Without that restriction the all-singletons
//! partition sets every membership to 0 and every graph would score 0.
//! Under it the minimum is 0 exactly when every component is regular.

use std::collections::HashMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::LabeledGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates that `blocks` are non-empty, disjoint and cover `0..n`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidInput("empty partition block".into()));
            }
            for &v in b {
                if v >= n {
                    return Err(Error::InvalidInput(format!("vertex {v} out of range for {n} vertices")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidInput(format!("vertex {v} appears in two blocks")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("vertex {v} is not covered by the partition")));
        }
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Ok(Partition { blocks })
    }

    /// Builds the partition from a block label per vertex.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let next = blocks.len();
            let b = *map.entry(l).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(v);
        }
        Partition { blocks }
    }

    pub fn trivial(n: usize) -> Self {
        Partition { blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] } }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut l = vec![0; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in block {
                l[v] = b;
            }
        }
        l
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyVertexSet {
    pub memberships: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TConorm {
    #[default]
    Max,
    /// `a + b - ab`
    Probabilistic,
}

impl TConorm {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TConorm::Max => a.max(b),
            TConorm::Probabilistic => a + b - a * b,
        }
    }
}

pub fn fuzzify_partition(g: &LabeledGraph, p: &Partition, tconorm: TConorm) -> Result<FuzzyVertexSet> {
    let p = Partition::new(g.n, p.blocks.clone())?;
    let labels = p.labels(g.n);
    let adj = g.neighbors();
    let mut mu = vec![0.0; g.n];
    for (b, block) in p.blocks.iter().enumerate() {
        let inside: Vec<usize> = block
            .iter()
            .map(|&v| adj[v].iter().filter(|&&(u, _)| labels[u] == b).count())
            .collect();
        let max_inside = inside.iter().copied().max().unwrap_or(0);
        let mut block_mu = vec![0.0; g.n];
        for (&v, &din) in block.iter().zip(&inside) {
            block_mu[v] = membership(adj[v].len(), din, max_inside, block.len());
        }
        for (acc, m) in mu.iter_mut().zip(block_mu) {
            *acc = tconorm.apply(*acc, m);
        }
    }
    Ok(FuzzyVertexSet { memberships: mu })
}

#[inline]
fn membership(degree: usize, inside: usize, max_inside: usize, block_size: usize) -> f64 {
    if degree == 0 {
        return 0.0;
    }
    let alpha = inside as f64 / degree as f64;
    let beta = if block_size == 1 {
        1.0
    } else if max_inside == 0 {
        0.0
    } else {
        inside as f64 / max_inside as f64
    };
    alpha * beta
}

/// Normalized De Luca–Termini entropy `-(1/(n ln 2)) Σ [μ ln μ + (1-μ) ln(1-μ)]`, in `[0, 1]`.
pub fn fuzzy_entropy(mu: &[f64]) -> f64 {
    if mu.is_empty() {
        return 0.0;
    }
    let h: f64 = mu.iter().map(|&m| -(xlogx(m) + xlogx(1.0 - m))).sum();
    (h / (mu.len() as f64 * std::f64::consts::LN_2)).clamp(0.0, 1.0)
}

#[inline]
fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// True when every block is connected with at least two vertices, or is a
/// single isolated vertex.
pub fn is_admissible(g: &LabeledGraph, p: &Partition) -> bool {
    let adj: Vec<Vec<usize>> = g.neighbors().into_iter().map(|l| l.into_iter().map(|(u, _)| u).collect()).collect();
    Evaluator::new(g, &adj).admissible(&p.labels(g.n))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AmbiguityOptions {
    /// Maximum number of partitions evaluated by the heuristic search.
    pub budget: usize,
    /// Graphs up to this many vertices are searched exhaustively.
    pub exact_limit: usize,
    pub seed: u64,
    pub tconorm: TConorm,
}

impl Default for AmbiguityOptions {
    fn default() -> Self {
        AmbiguityOptions { budget: 2000, exact_limit: 10, seed: 0, tconorm: TConorm::Max }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Ambiguity {
    pub value: f64,
    pub partition: Partition,
    pub exhaustive: bool,
    pub evaluations: usize,
}

pub fn ambiguity(g: &LabeledGraph, opts: &AmbiguityOptions) -> Result<Ambiguity> {
    if g.n == 0 {
        return Err(Error::InvalidInput("ambiguity of an empty graph".into()));
    }
    if g.n <= opts.exact_limit {
        ambiguity_exhaustive(g)
    } else {
        ambiguity_heuristic(g, opts)
    }
}

struct Evaluator<'a> {
    adj: &'a [Vec<usize>],
    n: usize,
}

impl<'a> Evaluator<'a> {
    fn new(g: &LabeledGraph, adj: &'a [Vec<usize>]) -> Self {
        Evaluator { adj, n: g.n }
    }

    /// Entropy of the fuzzified partition given as block labels in `0..n`.
    ///
    /// Each vertex belongs to one block and has zero membership elsewhere, so
    /// both t-conorms reduce to the own-block membership.
    fn entropy(&self, labels: &[usize]) -> f64 {
        let n = self.n;
        let mut inside = vec![0usize; n];
        let mut max_inside = vec![0usize; n];
        let mut size = vec![0usize; n];
        for v in 0..n {
            let l = labels[v];
            inside[v] = self.adj[v].iter().filter(|&&u| labels[u] == l).count();
            max_inside[l] = max_inside[l].max(inside[v]);
            size[l] += 1;
        }
        let h: f64 = (0..n)
            .map(|v| {
                let l = labels[v];
                let m = membership(self.adj[v].len(), inside[v], max_inside[l], size[l]);
                -(xlogx(m) + xlogx(1.0 - m))
            })
            .sum();
        (h / (n as f64 * std::f64::consts::LN_2)).clamp(0.0, 1.0)
    }

    fn admissible(&self, labels: &[usize]) -> bool {
        let n = self.n;
        let mut size = vec![0usize; n];
        let mut first = vec![usize::MAX; n];
        for v in 0..n {
            let l = labels[v];
            size[l] += 1;
            if first[l] == usize::MAX {
                first[l] = v;
            }
        }
        let mut reached = vec![false; n];
        let mut stack = Vec::new();
        for l in 0..n {
            if size[l] == 0 {
                continue;
            }
            let s = first[l];
            if size[l] == 1 {
                if !self.adj[s].is_empty() {
                    return false;
                }
                continue;
            }
            reached[s] = true;
            stack.push(s);
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if labels[u] == l && !reached[u] {
                        reached[u] = true;
                        count += 1;
                        stack.push(u);
                    }
                }
            }
            if count != size[l] {
                return false;
            }
        }
        true
    }
}

fn adjacency_lists(g: &LabeledGraph) -> Vec<Vec<usize>> {
    g.neighbors().into_iter().map(|l| l.into_iter().map(|(u, _)| u).collect()).collect()
}

/// Minimum over all admissible partitions, by restricted-growth enumeration.
/// Exponential in `n`; meant for small graphs.
pub fn ambiguity_exhaustive(g: &LabeledGraph) -> Result<Ambiguity> {
    if g.n == 0 {
        return Err(Error::InvalidInput("ambiguity of an empty graph".into()));
    }
    if g.n > 14 {
        return Err(Error::InvalidParameter(format!("exhaustive partition search refused for n = {} > 14", g.n)));
    }
    let adj = adjacency_lists(g);
    let ev = Evaluator::new(g, &adj);
    let mut labels = vec![0usize; g.n];
    let mut best = (f64::INFINITY, labels.clone());
    let mut evaluations = 0;
    enumerate(&ev, &mut labels, 1, 0, &mut best, &mut evaluations);
    Ok(Ambiguity {
        value: best.0,
        partition: Partition::from_labels(&best.1),
        exhaustive: true,
        evaluations,
    })
}

fn enumerate(
    ev: &Evaluator<'_>,
    labels: &mut [usize],
    next: usize,
    max_label: usize,
    best: &mut (f64, Vec<usize>),
    evaluations: &mut usize,
) {
    if next == labels.len() {
        if ev.admissible(labels) {
            *evaluations += 1;
            let h = ev.entropy(labels);
            if h < best.0 {
                *best = (h, labels.to_vec());
            }
        }
        return;
    }
    for l in 0..=max_label + 1 {
        labels[next] = l;
        enumerate(ev, labels, next + 1, max_label.max(l), best, evaluations);
    }
}

struct Search<'a> {
    ev: Evaluator<'a>,
    budget: usize,
    evaluations: usize,
    best: (f64, Vec<usize>),
    seen: HashMap<Vec<usize>, f64>,
    lookups: usize,
}

/// Cap on cache hits per budgeted evaluation, so a search that keeps
/// revisiting known partitions still terminates.
const LOOKUPS_PER_EVALUATION: usize = 20;

/// Relabels blocks in order of first appearance.
fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget || self.lookups >= LOOKUPS_PER_EVALUATION * self.budget
    }

    /// Entropy of `labels`; partitions seen before are not charged to the budget.
    fn score(&mut self, labels: &[usize]) -> f64 {
        self.lookups += 1;
        let key = canonical(labels);
        if let Some(&h) = self.seen.get(&key) {
            return h;
        }
        self.evaluations += 1;
        let h = self.ev.entropy(labels);
        self.seen.insert(key, h);
        if h < self.best.0 {
            self.best = (h, labels.to_vec());
        }
        h
    }

    /// First-improvement descent over vertex moves, swaps across a block
    /// boundary, block splits and block merges.
    fn descend(&mut self, mut labels: Vec<usize>, rng: &mut ChaCha8Rng) {
        let mut current = self.score(&labels);
        'outer: while !self.exhausted() && current > 0.0 {
            let mut moves = self.candidate_moves(&labels);
            moves.shuffle(rng);
            for mv in moves {
                if self.exhausted() {
                    break 'outer;
                }
                let cand = apply(&labels, &mv);
                if !self.ev.admissible(&cand) {
                    continue;
                }
                let h = self.score(&cand);
                if h < current - 1e-15 {
                    labels = cand;
                    current = h;
                    continue 'outer;
                }
            }
            break;
        }
    }

    fn candidate_moves(&self, labels: &[usize]) -> Vec<Move> {
        let adj = self.ev.adj;
        let n = labels.len();
        let mut moves = Vec::new();
        let mut pairs = std::collections::BTreeSet::new();
        let mut size = vec![0usize; n];
        for &l in labels {
            size[l] += 1;
        }
        let free = (0..n).find(|&l| size[l] == 0);
        for v in 0..n {
            for &u in &adj[v] {
                let (lv, lu) = (labels[v], labels[u]);
                if lv != lu {
                    moves.push(Move::Relabel(vec![v], lu));
                    if v < u {
                        moves.push(Move::Swap(v, u));
                    }
                    pairs.insert((lv.min(lu), lv.max(lu)));
                } else if v < u && size[lv] >= 4 {
                    if let Some(f) = free {
                        moves.push(Move::Relabel(vec![v, u], f));
                    }
                }
            }
        }
        moves.extend(pairs.into_iter().map(|(a, b)| Move::Merge(a, b)));
        moves
    }
}

enum Move {
    Relabel(Vec<usize>, usize),
    Swap(usize, usize),
    Merge(usize, usize),
}

fn apply(labels: &[usize], mv: &Move) -> Vec<usize> {
    let mut out = labels.to_vec();
    match mv {
        Move::Relabel(vs, l) => {
            for &v in vs {
                out[v] = *l;
            }
        }
        Move::Swap(v, u) => out.swap(*v, *u),
        Move::Merge(a, b) => {
            for l in out.iter_mut() {
                if *l == *b {
                    *l = *a;
                }
            }
        }
    }
    out
}

/// Attaches non-isolated singleton blocks to the neighbouring block with the
/// most edges to them, until none remain.
fn repair(labels: &mut [usize], adj: &[Vec<usize>]) {
    loop {
        let n = labels.len();
        let mut size = vec![0usize; n];
        for &l in labels.iter() {
            size[l] += 1;
        }
        let Some(v) = (0..n).find(|&v| size[labels[v]] == 1 && !adj[v].is_empty()) else {
            return;
        };
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &u in &adj[v] {
            *counts.entry(labels[u]).or_default() += 1;
        }
        let target = counts.into_iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).map(|(l, _)| l).unwrap();
        labels[v] = target;
    }
}

/// Connected components as blocks.
fn component_labels(g: &LabeledGraph) -> Vec<usize> {
    let mut labels = vec![0; g.n];
    for (c, comp) in g.components().iter().enumerate() {
        for &v in comp {
            labels[v] = c;
        }
    }
    labels
}

/// Greedy modularity agglomeration from singletons; returns the community
/// labels after every merge.
fn agglomerative_levels(g: &LabeledGraph, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let m2 = 2.0 * g.edges.len() as f64;
    let mut labels: Vec<usize> = (0..g.n).collect();
    let mut strength: Vec<f64> = adj.iter().map(|a| a.len() as f64 / m2).collect();
    let mut levels = Vec::new();
    loop {
        let mut between: HashMap<(usize, usize), f64> = HashMap::new();
        for &(i, j, _) in &g.edges {
            let (a, b) = (labels[i], labels[j]);
            if a != b {
                *between.entry((a.min(b), a.max(b))).or_default() += 1.0;
            }
        }
        let best = between
            .iter()
            .map(|(&(a, b), &e)| ((a, b), 2.0 * (e / m2 - strength[a] * strength[b])))
            .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(&x.0)));
        let Some(((a, b), _)) = best else { break };
        for l in labels.iter_mut() {
            if *l == b {
                *l = a;
            }
        }
        strength[a] += strength[b];
        strength[b] = 0.0;
        levels.push(labels.clone());
    }
    levels
}

/// Moves a few random vertices into a neighbour's block, kicking the search
/// out of the basin of `labels`.
fn perturb(labels: &[usize], adj: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut out = labels.to_vec();
    let kicks = rng.random_range(2..=4).min(out.len());
    for _ in 0..kicks {
        let v = rng.random_range(0..out.len());
        if let Some(&u) = adj[v].choose(rng) {
            out[v] = out[u];
        }
    }
    out
}

/// Random spanning forest with a few tree edges cut; its components become blocks.
fn random_forest_labels(g: &LabeledGraph, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.shuffle(rng);
    let mut parent: Vec<usize> = (0..g.n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = Vec::new();
    for &e in &order {
        let (i, j, _) = g.edges[e];
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            tree.push((i, j));
        }
    }
    let cuts = rng.random_range(1..=(g.n / 3).max(1)).min(tree.len());
    tree.shuffle(rng);
    let kept = &tree[cuts..];
    let mut parent: Vec<usize> = (0..g.n).collect();
    for &(i, j) in kept {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        parent[ri] = rj;
    }
    (0..g.n).map(|v| find(&mut parent, v)).collect()
}

/// Seeded local search within `opts.budget` evaluated partitions.
///
/// Starting points, in order: connected components, repaired levels of a
/// greedy modularity agglomeration, then random spanning-forest cuts
/// interleaved with two perturbations of the best partition so far for
/// every random cut.
pub fn ambiguity_heuristic(g: &LabeledGraph, opts: &AmbiguityOptions) -> Result<Ambiguity> {
    if g.n == 0 {
        return Err(Error::InvalidInput("ambiguity of an empty graph".into()));
    }
    let adj = adjacency_lists(g);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let trivial = component_labels(g);
    let mut search = Search {
        ev: Evaluator::new(g, &adj),
        budget: opts.budget.max(1),
        evaluations: 0,
        best: (f64::INFINITY, trivial.clone()),
        seen: HashMap::new(),
        lookups: 0,
    };

    search.descend(trivial, &mut rng);

    let levels = agglomerative_levels(g, &adj);
    let picks = 8.min(levels.len());
    for k in 0..picks {
        if search.exhausted() || search.best.0 == 0.0 {
            break;
        }
        let mut labels = levels[k * levels.len() / picks].clone();
        repair(&mut labels, &adj);
        search.descend(labels, &mut rng);
    }
    let mut restart = 0usize;
    while !search.exhausted() && search.best.0 > 0.0 && !g.edges.is_empty() {
        let mut labels = if restart % 3 != 0 {
            perturb(&search.best.1, &adj, &mut rng)
        } else {
            random_forest_labels(g, &mut rng)
        };
        restart += 1;
        repair(&mut labels, &adj);
        if search.ev.admissible(&labels) {
            search.descend(labels, &mut rng);
        }
    }

    Ok(Ambiguity {
        value: search.best.0,
        partition: Partition::from_labels(&search.best.1),
        exhaustive: false,
        evaluations: search.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> LabeledGraph {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        LabeledGraph::from_edges(n, &edges).unwrap()
    }

    fn star(leaves: usize) -> LabeledGraph {
        let edges: Vec<(usize, usize)> = (1..=leaves).map(|l| (0, l)).collect();
        LabeledGraph::from_edges(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn complete_graph_single_block() {
        let g = complete(4);
        let mu = fuzzify_partition(&g, &Partition::trivial(4), TConorm::Max).unwrap();
        assert_eq!(mu.memberships, vec![1.0; 4]);
    }

    #[test]
    fn complete_graph_two_blocks() {
        let g = complete(4);
        let p = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        for t in [TConorm::Max, TConorm::Probabilistic] {
            let mu = fuzzify_partition(&g, &p, t).unwrap();
            for m in mu.memberships {
                assert!((m - 1.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn single_vertex_membership_zero() {
        let g = LabeledGraph::from_edges(1, &[]).unwrap();
        let mu = fuzzify_partition(&g, &Partition::trivial(1), TConorm::Max).unwrap();
        assert_eq!(mu.memberships, vec![0.0]);
        assert_eq!(ambiguity(&g, &AmbiguityOptions::default()).unwrap().value, 0.0);
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
    }

    #[test]
    fn entropy_extremes() {
        assert_eq!(fuzzy_entropy(&[0.0, 1.0, 1.0]), 0.0);
        assert!((fuzzy_entropy(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complete_graphs_are_unambiguous() {
        for n in 3..=8 {
            assert_eq!(ambiguity(&complete(n), &AmbiguityOptions::default()).unwrap().value, 0.0);
        }
    }

    #[test]
    fn star_is_ambiguous() {
        let a = ambiguity(&star(4), &AmbiguityOptions::default()).unwrap();
        assert!(a.exhaustive);
        // the only admissible partition is the whole vertex set: hub 1, leaves 1/4
        let leaf = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        let expected = 4.0 * leaf / (5.0 * std::f64::consts::LN_2);
        assert!((a.value - expected).abs() < 1e-12, "{} vs {expected}", a.value);
    }

    #[test]
    fn admissibility() {
        let g = LabeledGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(is_admissible(&g, &Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap()));
        assert!(!is_admissible(&g, &Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap()));
        assert!(!is_admissible(&g, &Partition::new(4, vec![vec![0], vec![1, 2, 3]]).unwrap()));
    }

    #[test]
    fn fast_path_matches_fuzzify() {
        let g = LabeledGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (3, 5), (1, 4)]).unwrap();
        let adj = adjacency_lists(&g);
        let ev = Evaluator::new(&g, &adj);
        let labels = [0, 0, 0, 1, 1, 1];
        let p = Partition::from_labels(&labels);
        let mu = fuzzify_partition(&g, &p, TConorm::Max).unwrap();
        assert!((ev.entropy(&labels) - fuzzy_entropy(&mu.memberships)).abs() < 1e-15);
    }

    #[test]
    fn heuristic_is_deterministic() {
        let edges: Vec<(usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14)).chain([(0, 7), (3, 10), (2, 5)]).collect();
        let g = LabeledGraph::from_edges(14, &edges).unwrap();
        let opts = AmbiguityOptions { seed: 3, ..Default::default() };
        let a = ambiguity(&g, &opts).unwrap();
        let b = ambiguity(&g, &opts).unwrap();
        assert!(!a.exhaustive);
        assert!(a.evaluations <= opts.budget);
        assert_eq!(a.value, b.value);
        assert_eq!(a.partition, b.partition);
    }
}

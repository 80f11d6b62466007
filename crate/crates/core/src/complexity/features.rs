use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ambiguity, renyi2_entropy, AmbiguityOptions};
use crate::datamodel::Label;
use crate::error::Result;
use crate::graphcore::{stationary_distribution, EdgeWeighting, LabeledGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub protein_id: String,
    pub entropy: f64,
    pub ambiguity: f64,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub count: usize,
    pub entropy_mean: f64,
    pub entropy_std: f64,
    pub ambiguity_mean: f64,
    pub ambiguity_std: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub rows: Vec<ComplexityRow>,
    pub by_class: BTreeMap<Label, ClassSummary>,
}

/// Normalized Rényi entropy of the unweighted stationary distribution.
pub fn graph_entropy(g: &LabeledGraph) -> Result<f64> {
    let pi = stationary_distribution(g, EdgeWeighting::Unweighted)?;
    renyi2_entropy(&pi, true)
}

/// (entropy, ambiguity) for every graph, with per-class means and sample
/// standard deviations. The heuristic seed for graph `i` is `opts.seed + i`.
pub fn complexity_features(
    graphs: &[(String, &LabeledGraph, Label)],
    opts: &AmbiguityOptions,
) -> Result<ComplexityReport> {
    let rows: Vec<ComplexityRow> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, (id, g, label))| {
            let o = AmbiguityOptions { seed: opts.seed.wrapping_add(i as u64), ..*opts };
            Ok(ComplexityRow {
                protein_id: id.clone(),
                entropy: graph_entropy(g)?,
                ambiguity: ambiguity(g, &o)?.value,
                label: *label,
            })
        })
        .collect::<Result<_>>()?;

    let mut grouped: BTreeMap<Label, Vec<&ComplexityRow>> = BTreeMap::new();
    for r in &rows {
        grouped.entry(r.label).or_default().push(r);
    }
    let by_class = grouped
        .into_iter()
        .map(|(label, rs)| {
            let (em, es) = mean_std(rs.iter().map(|r| r.entropy));
            let (am, as_) = mean_std(rs.iter().map(|r| r.ambiguity));
            (label, ClassSummary { count: rs.len(), entropy_mean: em, entropy_std: es, ambiguity_mean: am, ambiguity_std: as_ })
        })
        .collect();
    Ok(ComplexityReport { rows, by_class })
}

fn mean_std(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// `protein_id,entropy,ambiguity,label`
pub fn write_features_csv<W: Write>(w: W, rows: &[ComplexityRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["protein_id", "entropy", "ambiguity", "label"])?;
    for r in rows {
        wtr.write_record([r.protein_id.clone(), format!("{}", r.entropy), format!("{}", r.ambiguity), r.label.as_str().to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> LabeledGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        LabeledGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn identical_graphs_identical_features() {
        let a = cycle(7);
        let mut b = LabeledGraph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 6)]).unwrap();
        b.provenance.source = "x".into();
        let graphs = vec![
            ("a".to_string(), &b, Label::Soluble),
            ("b".to_string(), &b, Label::Insoluble),
            ("c".to_string(), &a, Label::Insoluble),
        ];
        let rep = complexity_features(&graphs, &AmbiguityOptions::default()).unwrap();
        assert_eq!(rep.rows[0].entropy, rep.rows[1].entropy);
        assert_eq!(rep.rows[0].ambiguity, rep.rows[1].ambiguity);
        assert_eq!(rep.rows[2].entropy, 1.0);
        assert_eq!(rep.rows[2].ambiguity, 0.0);
        assert_eq!(rep.by_class[&Label::Insoluble].count, 2);
        assert_eq!(rep.by_class[&Label::Soluble].entropy_std, 0.0);
    }

    #[test]
    fn csv_layout() {
        let rows = vec![ComplexityRow { protein_id: "p".into(), entropy: 0.5, ambiguity: 0.25, label: Label::Soluble }];
        let mut buf = Vec::new();
        write_features_csv(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "protein_id,entropy,ambiguity,label\np,0.5,0.25,soluble\n");
    }
}

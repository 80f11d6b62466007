use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::chemphys::ResidueVectors;
use super::fasta::ResidueSequence;
use super::pdb::CoordinateSet;
use super::solubility::{Label, SolubilityRecord};
use crate::error::{Error, Result};
use crate::graphcore::{build_contact_graph, seriate, EdgeWeighting, LabeledGraph};

/// Seriated graph: one 3-vector per vertex, in seriation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorSequence {
    pub protein_id: String,
    pub elements: Vec<[f64; 3]>,
}

impl VectorSequence {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Labeled<T> {
    pub protein_id: String,
    pub item: T,
    pub label: Label,
}

pub type SeqDataset = Vec<Labeled<ResidueSequence>>;
pub type GraphDataset = Vec<Labeled<LabeledGraph>>;
pub type SeriatedDataset = Vec<Labeled<VectorSequence>>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssembleOptions {
    pub r_min: f64,
    pub r_max: f64,
    pub weighting: EdgeWeighting,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions {
            r_min: crate::graphcore::DEFAULT_R_MIN,
            r_max: crate::graphcore::DEFAULT_R_MAX,
            weighting: EdgeWeighting::default(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Datasets {
    pub sequences: SeqDataset,
    pub graphs: GraphDataset,
    pub seriated: SeriatedDataset,
    pub warnings: Vec<String>,
}

impl Datasets {
    /// Sequences of the proteins that also have a contact graph.
    pub fn graph_sequences(&self) -> Vec<&Labeled<ResidueSequence>> {
        let ids: HashSet<&str> = self.graphs.iter().map(|g| g.protein_id.as_str()).collect();
        self.sequences.iter().filter(|s| ids.contains(s.protein_id.as_str())).collect()
    }
}

fn note(warnings: &mut Vec<String>, msg: String) {
    warn!("{msg}");
    warnings.push(msg);
}

/// Joins the inputs on protein id. Excluded and unlabeled proteins are dropped;
/// coordinates without a sequence are reported and skipped. Output order follows `sequences`.
pub fn assemble_datasets(
    records: &[SolubilityRecord],
    sequences: &[ResidueSequence],
    coordinates: &[CoordinateSet],
    scores: &ResidueVectors,
    opts: &AssembleOptions,
) -> Result<Datasets> {
    let labels: HashMap<&str, Label> = records.iter().map(|r| (r.protein_id.as_str(), r.label)).collect();
    let mut out = Datasets::default();
    let mut seen = HashSet::new();
    for s in sequences {
        if !seen.insert(s.protein_id.as_str()) {
            return Err(Error::InvalidInput(format!("duplicate sequence id {}", s.protein_id)));
        }
        match labels.get(s.protein_id.as_str()) {
            Some(Label::Excluded) => {}
            Some(&label) => out.sequences.push(Labeled { protein_id: s.protein_id.clone(), item: s.clone(), label }),
            None => note(&mut out.warnings, format!("{}: sequence has no solubility record, skipped", s.protein_id)),
        }
    }

    let coords: HashMap<&str, &CoordinateSet> = coordinates.iter().map(|c| (c.protein_id.as_str(), c)).collect();
    for c in coordinates {
        if !seen.contains(c.protein_id.as_str()) {
            note(&mut out.warnings, format!("{}: coordinates without a sequence, excluded", c.protein_id));
        }
    }
    for s in &out.sequences {
        let Some(c) = coords.get(s.protein_id.as_str()) else { continue };
        if c.len() != s.item.len() {
            note(&mut out.warnings, format!("{}: {} CA atoms vs {} residues in sequence", s.protein_id, c.len(), s.item.len()));
        }
        let attrs: Vec<[f64; 3]> = c.residue_types.iter().map(|&r| scores.get(r)).collect();
        match build_contact_graph(&c.positions, &attrs, opts.r_min, opts.r_max) {
            Ok(mut g) => {
                g.provenance.source = s.protein_id.clone();
                out.graphs.push(Labeled { protein_id: s.protein_id.clone(), item: g, label: s.label });
            }
            Err(e) => note(&mut out.warnings, format!("{}: contact graph not built: {e}", s.protein_id)),
        }
    }

    for g in &out.graphs {
        let ser = seriate(&g.item, opts.weighting)?;
        if ser.disconnected() {
            note(&mut out.warnings, format!("{}: graph has {} components, seriated per component", g.protein_id, ser.components));
        }
        out.seriated.push(Labeled {
            protein_id: g.protein_id.clone(),
            item: VectorSequence { protein_id: g.protein_id.clone(), elements: ser.elements },
            label: g.label,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SplitSpec {
    /// Share of every class placed in the training part (rounded to nearest).
    TrainFraction(f64),
    /// Number of test items per class.
    TestCounts { soluble: usize, insoluble: usize },
    /// User-chosen training ids; everything else is test.
    ExplicitTrain(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
    pub train_counts: BTreeMap<Label, usize>,
    pub test_counts: BTreeMap<Label, usize>,
}

impl DatasetSplit {
    pub fn train_indices(&self, ids: &[String]) -> Vec<usize> {
        positions(ids, &self.train_ids)
    }

    pub fn test_indices(&self, ids: &[String]) -> Vec<usize> {
        positions(ids, &self.test_ids)
    }
}

fn positions(ids: &[String], wanted: &[String]) -> Vec<usize> {
    let set: HashSet<&str> = wanted.iter().map(String::as_str).collect();
    ids.iter().enumerate().filter(|(_, id)| set.contains(id.as_str())).map(|(i, _)| i).collect()
}

/// Stratified split. Each class is shuffled with a generator seeded by `seed`;
/// both parts keep the input order.
pub fn split(items: &[(String, Label)], spec: &SplitSpec, seed: u64) -> Result<DatasetSplit> {
    let mut seen = HashSet::new();
    for (id, label) in items {
        if *label == Label::Excluded {
            return Err(Error::InvalidInput(format!("{id}: excluded proteins cannot be split")));
        }
        if !seen.insert(id.as_str()) {
            return Err(Error::InvalidInput(format!("duplicate id {id}")));
        }
    }

    let mut in_test = vec![false; items.len()];
    match spec {
        SplitSpec::ExplicitTrain(train) => {
            let train: HashSet<&str> = train.iter().map(String::as_str).collect();
            if let Some(missing) = train.iter().find(|id| !seen.contains(*id)) {
                return Err(Error::InvalidParameter(format!("training id {missing} is not in the dataset")));
            }
            for (i, (id, _)) in items.iter().enumerate() {
                in_test[i] = !train.contains(id.as_str());
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for class in [Label::Insoluble, Label::Soluble] {
                let mut members: Vec<usize> = (0..items.len()).filter(|&i| items[i].1 == class).collect();
                let n = members.len();
                let n_test = match spec {
                    SplitSpec::TrainFraction(f) => {
                        if !(0.0..=1.0).contains(f) {
                            return Err(Error::InvalidParameter(format!("train fraction must be in [0, 1], got {f}")));
                        }
                        n - (f * n as f64).round() as usize
                    }
                    SplitSpec::TestCounts { soluble, insoluble } => {
                        let k = if class == Label::Soluble { *soluble } else { *insoluble };
                        if k > n {
                            return Err(Error::InvalidParameter(format!(
                                "requested {k} {} test items but only {n} available",
                                class.as_str()
                            )));
                        }
                        k
                    }
                    SplitSpec::ExplicitTrain(_) => unreachable!(),
                };
                members.shuffle(&mut rng);
                for &i in &members[..n_test] {
                    in_test[i] = true;
                }
            }
        }
    }

    let mut out = DatasetSplit { train_ids: vec![], test_ids: vec![], train_counts: BTreeMap::new(), test_counts: BTreeMap::new() };
    for (i, (id, label)) in items.iter().enumerate() {
        let (ids, counts) = if in_test[i] { (&mut out.test_ids, &mut out.test_counts) } else { (&mut out.train_ids, &mut out.train_counts) };
        ids.push(id.clone());
        *counts.entry(*label).or_insert(0) += 1;
    }
    Ok(out)
}

/// SHA-256 over length-prefixed input blobs, hex encoded.
pub fn provenance_hash<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for blob in inputs {
        h.update((blob.len() as u64).to_le_bytes());
        h.update(blob);
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub protein_id: String,
    pub label: Label,
    /// "train", "test", or absent when no split applies.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub split: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub input_hash: String,
    pub seed: Option<u64>,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn new(name: &str, items: &[(String, Label)], split: Option<&DatasetSplit>, seed: Option<u64>, input_hash: String) -> Self {
        let train: HashSet<&str> = split.map(|s| s.train_ids.iter().map(String::as_str).collect()).unwrap_or_default();
        let entries = items
            .iter()
            .map(|(id, label)| ManifestEntry {
                protein_id: id.clone(),
                label: *label,
                split: split.map(|_| if train.contains(id.as_str()) { "train" } else { "test" }.to_string()),
            })
            .collect();
        DatasetManifest { name: name.to_string(), input_hash, seed, entries }
    }

    pub fn to_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(sol: usize, ins: usize) -> Vec<(String, Label)> {
        (0..sol).map(|i| (format!("s{i}"), Label::Soluble)).chain((0..ins).map(|i| (format!("i{i}"), Label::Insoluble))).collect()
    }

    #[test]
    fn half_split_reproducible() {
        let it = items(10, 10);
        let a = split(&it, &SplitSpec::TrainFraction(0.5), 3).unwrap();
        let b = split(&it, &SplitSpec::TrainFraction(0.5), 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.train_counts[&Label::Soluble], 5);
        assert_eq!(a.test_counts[&Label::Insoluble], 5);
        let train: HashSet<_> = a.train_ids.iter().collect();
        assert!(a.test_ids.iter().all(|id| !train.contains(id)));
        assert_eq!(a.train_ids.len() + a.test_ids.len(), 20);
    }

    #[test]
    fn seed_changes_membership_not_counts() {
        let it = items(10, 10);
        let a = split(&it, &SplitSpec::TrainFraction(0.5), 1).unwrap();
        let b = split(&it, &SplitSpec::TrainFraction(0.5), 2).unwrap();
        assert_ne!(a.train_ids, b.train_ids);
        assert_eq!(a.train_counts, b.train_counts);
    }

    #[test]
    fn test_counts_and_infeasible() {
        let it = items(77, 377);
        let s = split(&it, &SplitSpec::TestCounts { soluble: 27, insoluble: 132 }, 0).unwrap();
        assert_eq!(s.test_counts[&Label::Soluble], 27);
        assert_eq!(s.test_counts[&Label::Insoluble], 132);
        let err = split(&it, &SplitSpec::TestCounts { soluble: 78, insoluble: 0 }, 0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn explicit_train() {
        let it = items(2, 2);
        let s = split(&it, &SplitSpec::ExplicitTrain(vec!["s0".into(), "i1".into()]), 0).unwrap();
        assert_eq!(s.train_ids, vec!["s0", "i1"]);
        assert_eq!(s.test_ids, vec!["s1", "i0"]);
        assert!(split(&it, &SplitSpec::ExplicitTrain(vec!["zz".into()]), 0).is_err());
    }

    #[test]
    fn excluded_rejected() {
        assert!(split(&[("x".into(), Label::Excluded)], &SplitSpec::TrainFraction(0.5), 0).is_err());
    }

    #[test]
    fn manifest_marks_split() {
        let it = items(1, 1);
        let s = split(&it, &SplitSpec::ExplicitTrain(vec!["s0".into()]), 0).unwrap();
        let m = DatasetManifest::new("t", &it, Some(&s), Some(0), provenance_hash([b"a".as_slice()]));
        assert_eq!(m.entries[0].split.as_deref(), Some("train"));
        assert_eq!(m.entries[1].split.as_deref(), Some("test"));
        assert_ne!(provenance_hash([b"ab".as_slice(), b"c"]), provenance_hash([b"a".as_slice(), b"bc"]));
    }
}

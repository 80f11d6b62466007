use std::collections::HashSet;

use foldclass_core::datamodel::{
    assemble_datasets, normalize_solubility, parse_fasta, read_raw_table, split, write_fasta, write_table,
    AssembleOptions, CoordinateSet, Label, NonstandardPolicy, ResidueSequence, ResidueVectors, SplitSpec,
};
use proptest::prelude::*;

fn helix(n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|i| {
            let a = i as f64 * 100f64.to_radians();
            [2.3 * a.cos(), 2.3 * a.sin(), 1.5 * i as f64]
        })
        .collect()
}

fn coords(id: &str, seq: &[u8]) -> CoordinateSet {
    CoordinateSet { protein_id: id.into(), positions: helix(seq.len()), residue_types: seq.iter().map(|&c| Some(c)).collect() }
}

#[test]
fn datasets_from_partial_structures() {
    let raw: Vec<(String, f64)> = [("p0", 90.0), ("p1", 10.0), ("p2", 95.0), ("p3", 5.0), ("p4", 100.0)]
        .iter()
        .map(|(id, v)| (id.to_string(), *v))
        .collect();
    let records = normalize_solubility(&raw).unwrap();
    let seqs: Vec<ResidueSequence> =
        (0..5).map(|i| ResidueSequence::new(format!("p{i}"), b"ACDEFGHIKLMN").unwrap()).collect();
    let structures = vec![coords("p1", b"ACDEFGHIKLMN"), coords("p3", b"ACDEFGHIKLMN")];
    let d = assemble_datasets(&records, &seqs, &structures, &ResidueVectors([[0.5; 3]; 20]), &AssembleOptions::default()).unwrap();
    assert_eq!(d.sequences.len(), 5);
    assert_eq!(d.graphs.len(), 2);
    assert_eq!(d.seriated.len(), 2);
    assert_eq!(d.graphs.iter().map(|g| g.protein_id.as_str()).collect::<Vec<_>>(), ["p1", "p3"]);
    assert!(d.graphs.iter().all(|g| g.label == Label::Insoluble));
    assert_eq!(d.seriated[0].item.elements.len(), 12);
}

#[test]
fn empty_coordinate_set_is_excluded_with_warning() {
    let records = normalize_solubility(&[("p0".into(), 90.0), ("p1".into(), 10.0)]).unwrap();
    let seqs = vec![ResidueSequence::new("p0", b"ACDE").unwrap(), ResidueSequence::new("p1", b"ACDE").unwrap()];
    let empty = CoordinateSet { protein_id: "p0".into(), positions: vec![], residue_types: vec![] };
    let d = assemble_datasets(&records, &seqs, &[empty], &ResidueVectors([[0.0; 3]; 20]), &AssembleOptions::default()).unwrap();
    assert!(d.graphs.is_empty());
    assert!(!d.warnings.is_empty());
}

fn residues() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(proptest::sample::select(b"ACDEFGHIKLMNPQRSTVWY".to_vec()), 1..200)
}

proptest! {
    #[test]
    fn fasta_round_trip(seqs in proptest::collection::vec(residues(), 1..8)) {
        let seqs: Vec<ResidueSequence> =
            seqs.iter().enumerate().map(|(i, s)| ResidueSequence::new(format!("id{i}"), s).unwrap()).collect();
        let mut buf = Vec::new();
        write_fasta(&mut buf, &seqs).unwrap();
        let back = parse_fasta(buf.as_slice(), &NonstandardPolicy::Drop).unwrap();
        prop_assert!(back.dropped.is_empty());
        prop_assert_eq!(back.sequences, seqs);
    }

    #[test]
    fn solubility_round_trip(values in proptest::collection::vec(0.0f64..150.0, 1..40)) {
        let mut raw: Vec<(String, f64)> = values.iter().enumerate().map(|(i, v)| (format!("p{i}"), *v)).collect();
        raw.push(("top".into(), 200.0));
        let records = normalize_solubility(&raw).unwrap();
        let mut buf = Vec::new();
        write_table(&mut buf, &records).unwrap();
        let again = normalize_solubility(&read_raw_table(buf.as_slice()).unwrap()).unwrap();
        prop_assert_eq!(again, records);
    }

    #[test]
    fn split_partitions_each_class(n_sol in 2usize..30, n_ins in 2usize..30, f in 0.2f64..0.8, seed in any::<u64>()) {
        let items: Vec<(String, Label)> = (0..n_sol + n_ins)
            .map(|i| (format!("p{i:03}"), if i < n_sol { Label::Soluble } else { Label::Insoluble }))
            .collect();
        let s = split(&items, &SplitSpec::TrainFraction(f), seed).unwrap();
        let train: HashSet<&String> = s.train_ids.iter().collect();
        let test: HashSet<&String> = s.test_ids.iter().collect();
        prop_assert!(train.is_disjoint(&test));
        prop_assert_eq!(train.len() + test.len(), items.len());
        for class in [Label::Soluble, Label::Insoluble] {
            let total = items.iter().filter(|(_, l)| *l == class).count();
            let t = s.train_counts.get(&class).copied().unwrap_or(0);
            prop_assert_eq!(t + s.test_counts.get(&class).copied().unwrap_or(0), total);
            prop_assert!((t as f64 - f * total as f64).abs() <= 0.5 + 1e-9);
        }
        prop_assert_eq!(split(&items, &SplitSpec::TrainFraction(f), seed).unwrap(), s);
    }
}

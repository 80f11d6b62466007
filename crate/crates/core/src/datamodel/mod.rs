//! Input parsing, class labels and dataset assembly.

pub mod alphabet;
mod chemphys;
mod dataset;
mod fasta;
mod pdb;
mod solubility;

pub use chemphys::{chemphys_components, ChemPhysComponents, ChemPhysTable, ResidueVectors};
pub use dataset::{
    assemble_datasets, provenance_hash, split, AssembleOptions, DatasetManifest, DatasetSplit, Datasets, GraphDataset,
    Labeled, ManifestEntry, SeqDataset, SeriatedDataset, SplitSpec, VectorSequence,
};
pub use fasta::{parse_fasta, write_fasta, FastaParse, NonstandardPolicy, ResidueSequence};
pub use pdb::{parse_coordinates, CoordinateSet};
pub use solubility::{
    normalize_solubility, read_raw_table, write_table, Label, SolubilityRecord, INSOLUBLE_MAX, SOLUBLE_MIN,
};

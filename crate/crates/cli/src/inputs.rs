use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::Path;

use foldclass_core::datamodel::{
    assemble_datasets, chemphys_components, normalize_solubility, parse_coordinates, parse_fasta, provenance_hash,
    read_raw_table, AssembleOptions, ChemPhysComponents, ChemPhysTable, CoordinateSet, Datasets, ResidueSequence,
    ResidueVectors, SolubilityRecord,
};
use foldclass_core::datamodel::alphabet::ALPHABET_SIZE;
use foldclass_core::graphcore::EdgeWeighting;
use foldclass_core::seqdist::CostMatrix;
use log::{info, warn};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult, Stage};

/// Number of descriptor components used as vertex labels.
pub const VERTEX_COMPONENTS: usize = 3;

/// Everything read from disk for one run, plus a content hash per input.
#[derive(Debug)]
pub struct Inputs {
    pub records: Vec<SolubilityRecord>,
    pub sequences: Vec<ResidueSequence>,
    pub dropped: Vec<String>,
    pub coordinates: Vec<CoordinateSet>,
    pub components: Option<ChemPhysComponents>,
    pub datasets: Datasets,
    pub hashes: BTreeMap<String, String>,
}

pub fn hash_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::data("hash", format!("{}: {e}", path.display())))?;
    Ok(provenance_hash([bytes.as_slice()]))
}

/// `.pdb` / `.ent` files of a directory, sorted by file name.
pub fn structure_files(dir: &Path) -> CliResult<Vec<std::path::PathBuf>> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| CliError::data("structures", format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pdb") || x.eq_ignore_ascii_case("ent")))
        .collect();
    files.sort();
    Ok(files)
}

pub fn hash_structures(dir: &Path) -> CliResult<String> {
    let mut blobs = Vec::new();
    for f in structure_files(dir)? {
        blobs.push(f.file_name().unwrap_or_default().to_string_lossy().into_owned().into_bytes());
        blobs.push(fs::read(&f).stage("structures")?);
    }
    Ok(provenance_hash(blobs.iter().map(Vec::as_slice)))
}

/// Hashes of every input file named by the configuration.
pub fn input_hashes(cfg: &ExperimentConfig) -> CliResult<BTreeMap<String, String>> {
    let mut h = BTreeMap::new();
    let files = [
        ("solubility", &cfg.solubility),
        ("sequences", &cfg.sequences),
        ("descriptors", &cfg.descriptors),
        ("cost_matrix", &cfg.cost_matrix),
        ("train_ids", &cfg.split.train_ids),
    ];
    for (name, p) in files {
        if let Some(p) = p {
            h.insert(name.to_string(), hash_file(p)?);
        }
    }
    if let Some(dir) = &cfg.structures {
        h.insert("structures".to_string(), hash_structures(dir)?);
    }
    Ok(h)
}

pub fn read_records(path: &Path) -> CliResult<Vec<SolubilityRecord>> {
    let f = fs::File::open(path).map_err(|e| CliError::data("ingest", format!("{}: {e}", path.display())))?;
    let raw = read_raw_table(f).stage("ingest")?;
    normalize_solubility(&raw).stage("ingest")
}

pub fn read_sequences(cfg: &ExperimentConfig, path: &Path) -> CliResult<(Vec<ResidueSequence>, Vec<String>)> {
    let f = fs::File::open(path).map_err(|e| CliError::data("ingest", format!("{}: {e}", path.display())))?;
    let parsed = parse_fasta(BufReader::new(f), &cfg.nonstandard_policy()).stage("ingest")?;
    Ok((parsed.sequences, parsed.dropped))
}

pub fn read_components(path: &Path) -> CliResult<ChemPhysComponents> {
    let f = fs::File::open(path).map_err(|e| CliError::data("descriptors", format!("{}: {e}", path.display())))?;
    let table = ChemPhysTable::read_csv(f).stage("descriptors")?;
    chemphys_components(&table, VERTEX_COMPONENTS).stage("descriptors")
}

pub fn read_cost_matrix(path: &Path) -> CliResult<CostMatrix> {
    let f = fs::File::open(path).map_err(|e| CliError::data("cost-matrix", format!("{}: {e}", path.display())))?;
    CostMatrix::read_text(BufReader::new(f)).stage("cost-matrix")
}

/// Parses every structure file; unreadable ones are reported and skipped.
pub fn read_structures(dir: &Path) -> CliResult<(Vec<CoordinateSet>, Vec<String>)> {
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    for f in structure_files(dir)? {
        let id = f.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        let text = fs::read_to_string(&f).stage("structures")?;
        match parse_coordinates(&id, &text) {
            Ok(c) => out.push(c),
            Err(e) => {
                let msg = format!("{id}: skipped structure: {e}");
                warn!("{msg}");
                warnings.push(msg);
            }
        }
    }
    Ok((out, warnings))
}

pub fn assemble_options(cfg: &ExperimentConfig) -> AssembleOptions {
    AssembleOptions { r_min: cfg.r_min, r_max: cfg.r_max, weighting: EdgeWeighting::Distance }
}

/// Reads and joins all inputs. Structures are parsed only when `with_structures` is set.
pub fn load_inputs(cfg: &ExperimentConfig, with_structures: bool) -> CliResult<Inputs> {
    let sol = cfg.solubility.as_deref().ok_or_else(|| CliError::config("ingest", "no solubility table configured"))?;
    let seq = cfg.sequences.as_deref().ok_or_else(|| CliError::config("ingest", "no sequence file configured"))?;
    let records = read_records(sol)?;
    let (sequences, dropped) = read_sequences(cfg, seq)?;
    let components = cfg.descriptors.as_deref().map(read_components).transpose()?;
    let vectors = match &components {
        Some(c) => c.residue_vectors().stage("descriptors")?,
        None => ResidueVectors([[0.0; 3]; ALPHABET_SIZE]),
    };
    let (coordinates, mut structure_warnings) = match (&cfg.structures, with_structures) {
        (Some(dir), true) => read_structures(dir)?,
        _ => (Vec::new(), Vec::new()),
    };
    let mut datasets =
        assemble_datasets(&records, &sequences, &coordinates, &vectors, &assemble_options(cfg)).stage("assemble")?;
    structure_warnings.append(&mut datasets.warnings);
    datasets.warnings = structure_warnings;
    info!(
        "{} labeled sequences, {} graphs, {} dropped for nonstandard residues",
        datasets.sequences.len(),
        datasets.graphs.len(),
        dropped.len()
    );
    Ok(Inputs { records, sequences, dropped, coordinates, components, datasets, hashes: input_hashes(cfg)? })
}

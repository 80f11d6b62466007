use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use foldclass_core::datamodel::{NonstandardPolicy, SplitSpec};
use foldclass_core::evolve::GaConfig;
use foldclass_core::graphcore::{DEFAULT_R_MAX, DEFAULT_R_MIN};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    /// Residue sequences, unit substitution costs.
    #[default]
    Seq,
    /// Residue sequences, PAM120-derived costs.
    SeqPam,
    /// Residue sequences, learned (or supplied) cost matrix.
    SeqLearned,
    /// Contact graphs compared through a degree/label signature distance.
    GraphDirect,
    /// Seriated vector sequences, Euclidean substitution costs.
    Seriated,
    /// (entropy, ambiguity) features, Gaussian kernel.
    ComplexityFeatures,
}

impl Representation {
    pub const ALL: [Representation; 6] = [
        Representation::Seq,
        Representation::SeqPam,
        Representation::SeqLearned,
        Representation::GraphDirect,
        Representation::Seriated,
        Representation::ComplexityFeatures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Representation::Seq => "seq",
            Representation::SeqPam => "seq-pam",
            Representation::SeqLearned => "seq-learned",
            Representation::GraphDirect => "graph-direct",
            Representation::Seriated => "seriated",
            Representation::ComplexityFeatures => "complexity-features",
        }
    }

    pub fn needs_graphs(self) -> bool {
        matches!(self, Representation::GraphDirect | Representation::Seriated | Representation::ComplexityFeatures)
    }

    /// Whether vertex labels (descriptor components) enter the computation.
    pub fn needs_descriptors(self) -> bool {
        matches!(self, Representation::GraphDirect | Representation::Seriated)
    }

    pub fn is_sequence(self) -> bool {
        matches!(self, Representation::Seq | Representation::SeqPam | Representation::SeqLearned)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Representation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Representation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown representation {s:?}; expected one of seq, seq-pam, seq-learned, graph-direct, seriated, complexity-features"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    /// Per-class training share, used unless test counts or training ids are given.
    pub train_fraction: f64,
    pub test_soluble: Option<usize>,
    pub test_insoluble: Option<usize>,
    /// File with one training protein id per line.
    pub train_ids: Option<PathBuf>,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { train_fraction: 0.65, test_soluble: None, test_insoluble: None, train_ids: None }
    }
}

impl SplitConfig {
    pub fn spec(&self) -> CliResult<SplitSpec> {
        if let Some(path) = &self.train_ids {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::data("split", format!("{}: {e}", path.display())))?;
            let ids = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect();
            return Ok(SplitSpec::ExplicitTrain(ids));
        }
        match (self.test_soluble, self.test_insoluble) {
            (Some(soluble), Some(insoluble)) => Ok(SplitSpec::TestCounts { soluble, insoluble }),
            (None, None) => Ok(SplitSpec::TrainFraction(self.train_fraction)),
            _ => Err(CliError::config("split", "test_soluble and test_insoluble must be given together")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnConfig {
    #[serde(flatten)]
    pub ga: GaConfig,
    /// Training share of the inner control split.
    pub control_train_fraction: f64,
    /// Score genomes by balanced accuracy instead of accuracy.
    pub balanced: bool,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig { ga: GaConfig::default(), control_train_fraction: 0.7, balanced: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// CSV `protein_id,solubility` with raw (unnormalized) solubility values.
    pub solubility: Option<PathBuf>,
    pub sequences: Option<PathBuf>,
    /// Directory of `<protein_id>.pdb` files.
    pub structures: Option<PathBuf>,
    /// Amino-acid descriptor table.
    pub descriptors: Option<PathBuf>,
    /// Substitution costs for `seq-learned`; learned by the GA when absent.
    pub cost_matrix: Option<PathBuf>,
    /// Nonstandard residue letters mapped to canonical ones; proteins containing
    /// unmapped nonstandard letters are dropped.
    pub residue_map: BTreeMap<char, char>,
    pub representation: Representation,
    /// Use only the sequences of proteins that have a contact graph.
    pub restrict_to_structures: bool,
    pub seed: u64,
    pub svm_c: f64,
    pub indel: f64,
    pub vector_scale: f64,
    pub gaussian_sigma: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub ambiguity_budget: usize,
    pub split: SplitConfig,
    pub learn: LearnConfig,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            solubility: None,
            sequences: None,
            structures: None,
            descriptors: None,
            cost_matrix: None,
            residue_map: BTreeMap::new(),
            representation: Representation::default(),
            restrict_to_structures: false,
            seed: 0,
            svm_c: 2.0,
            indel: 1.0,
            vector_scale: 1.0,
            gaussian_sigma: 1.0,
            r_min: DEFAULT_R_MIN,
            r_max: DEFAULT_R_MAX,
            ambiguity_budget: 2000,
            split: SplitConfig::default(),
            learn: LearnConfig::default(),
            out: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    /// Reads TOML or JSON (by extension, JSON also sniffed from a leading `{`).
    /// Relative paths are resolved against the file's directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let mut cfg: ExperimentConfig = if is_json {
            serde_json::from_str(&text).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?
        };
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(q) = p {
                if q.is_relative() {
                    *q = base.join(&*q);
                }
            }
        };
        fix(&mut self.solubility);
        fix(&mut self.sequences);
        fix(&mut self.structures);
        fix(&mut self.descriptors);
        fix(&mut self.cost_matrix);
        fix(&mut self.split.train_ids);
        if self.out.is_relative() {
            self.out = base.join(&self.out);
        }
    }

    pub fn nonstandard_policy(&self) -> NonstandardPolicy {
        if self.residue_map.is_empty() {
            NonstandardPolicy::Drop
        } else {
            NonstandardPolicy::Map(self.residue_map.clone())
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::config("config", m));
        if !(self.svm_c > 0.0 && self.svm_c.is_finite()) {
            return bad(format!("svm_c must be > 0, got {}", self.svm_c));
        }
        if !(self.indel > 0.0 && self.indel.is_finite()) {
            return bad(format!("indel must be > 0, got {}", self.indel));
        }
        if !(self.vector_scale > 0.0 && self.gaussian_sigma > 0.0) {
            return bad("vector_scale and gaussian_sigma must be > 0".into());
        }
        if !(0.0 <= self.r_min && self.r_min < self.r_max) {
            return bad(format!("need 0 <= r_min < r_max, got ({}, {})", self.r_min, self.r_max));
        }
        if !(0.0..=1.0).contains(&self.split.train_fraction) {
            return bad(format!("split.train_fraction must be in [0, 1], got {}", self.split.train_fraction));
        }
        if !(0.0 < self.learn.control_train_fraction && self.learn.control_train_fraction < 1.0) {
            return bad(format!("learn.control_train_fraction must be in (0, 1), got {}", self.learn.control_train_fraction));
        }
        self.learn.ga.validate().map_err(|e| CliError::config("config", e.to_string()))?;
        if self.solubility.is_none() || self.sequences.is_none() {
            return bad("solubility and sequences paths are required".into());
        }
        if (self.representation.needs_graphs() || self.restrict_to_structures) && self.structures.is_none() {
            return bad(format!("representation {} needs a structures directory", self.representation));
        }
        if self.representation.needs_descriptors() && self.descriptors.is_none() {
            return bad(format!("representation {} needs a descriptor table", self.representation));
        }
        for p in [&self.solubility, &self.sequences, &self.structures, &self.descriptors, &self.cost_matrix, &self.split.train_ids]
            .into_iter()
            .flatten()
        {
            if !p.exists() {
                return bad(format!("{} does not exist", p.display()));
            }
        }
        Ok(())
    }
}

/// Per-stage seed: the first 8 bytes (little endian) of SHA-256(root seed LE ‖ stage name).
pub fn stage_seed(root: u64, stage: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update(stage.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

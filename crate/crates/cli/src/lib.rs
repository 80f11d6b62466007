//! Command-line orchestration: configuration, input loading, the six
//! representation pipelines, the length baseline and run manifests.

mod commands;
pub mod config;
pub mod error;
pub mod inputs;
pub mod pipeline;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{stage_seed, ExperimentConfig, LearnConfig, Representation, SplitConfig};
pub use error::{CliError, CliResult};
pub use pipeline::{
    baseline_length_classifier, label_shuffle_control, replay, run_baseline, run_experiment, threshold_errors,
    BaselineResult, ExperimentOutcome, RunManifest,
};

#[derive(Debug, Parser)]
#[command(name = "foldclass", version, about = "Protein solubility classification on sequences, contact graphs and seriations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by all verbs; flags override the configuration file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML or JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// seq, seq-pam, seq-learned, graph-direct, seriated or complexity-features.
    #[arg(long, global = true)]
    pub representation: Option<Representation>,
    #[arg(long, global = true)]
    pub svm_c: Option<f64>,
    #[arg(long, global = true)]
    pub r_min: Option<f64>,
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    #[arg(long, global = true)]
    pub indel: Option<f64>,
    #[arg(long, global = true)]
    pub solubility: Option<PathBuf>,
    #[arg(long, global = true)]
    pub sequences: Option<PathBuf>,
    /// Directory of PDB files named `<protein_id>.pdb`.
    #[arg(long, global = true)]
    pub structures: Option<PathBuf>,
    #[arg(long, global = true)]
    pub descriptors: Option<PathBuf>,
    #[arg(long, global = true)]
    pub cost_matrix: Option<PathBuf>,
}

impl CommonArgs {
    pub fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone().into();
                }
            )*};
        }
        set!(seed, representation, svm_c, r_min, r_max, indel, solubility, sequences, structures, descriptors, cost_matrix);
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize solubility, label proteins, filter sequences, and write a split manifest.
    Ingest(Flags),
    /// Build labeled contact graphs from the structures.
    BuildGraphs(Flags),
    /// Seriate every contact graph into a vector sequence.
    Seriate(Flags),
    /// Pairwise dissimilarity matrix of the selected representation.
    Distances(Flags),
    /// Fit the SVM on the training part and save the model.
    Train(Flags),
    /// Learn a substitution-cost matrix with the genetic search.
    Evolve(EvolveArgs),
    /// Entropy and ambiguity of every contact graph.
    Complexity(Flags),
    /// PCA of the descriptor table and cost matrix, CCA between them.
    Stats(StatsArgs),
    /// Run one representation end to end.
    Experiment(ExperimentArgs),
    /// Length-threshold baseline classifier.
    Baseline(Flags),
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Continue from a checkpoint written by an earlier run.
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Descriptor components kept.
    #[arg(long, default_value_t = 3)]
    pub components: usize,
    /// Cost-matrix components kept.
    #[arg(long, default_value_t = 7)]
    pub cost_components: usize,
    /// Use the correlation rather than covariance matrix for the cost-matrix PCA.
    #[arg(long)]
    pub standardize_costs: bool,
    /// Row permutations for the canonical-correlation significance test.
    #[arg(long, default_value_t = 999)]
    pub shuffles: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Replay a previous run from its manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Also train on permuted training labels and report both runs.
    #[arg(long)]
    pub shuffle_control: bool,
}

pub fn run(cli: Cli) -> CliResult<()> {
    commands::dispatch(cli.command)
}

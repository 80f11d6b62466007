use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use foldclass_core::complexity::{complexity_features, AmbiguityOptions, ComplexityReport};
use foldclass_core::datamodel::{
    provenance_hash, split, DatasetManifest, DatasetSplit, Label, ResidueSequence, SplitSpec,
};
use foldclass_core::evolve::{self, decode, Checkpoint, GaResult, SequenceFitness};
use foldclass_core::graphcore::LabeledGraph;
use foldclass_core::kernel::{center_with_stats, gaussian_kernel, gaussian_row, kernel_row, DistanceMatrix, KernelMatrix};
use foldclass_core::seqdist::{pairwise_distances, pam120_costs, CostMatrix, CostScheme, Pattern, Substitution};
use foldclass_core::svm::{self, ErrorReport, SvmModel, SvmParams};
use log::info;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{stage_seed, ExperimentConfig, Representation};
use crate::error::{CliError, CliResult, Stage};
use crate::inputs::{input_hashes, load_inputs, read_cost_matrix, Inputs};

pub const GRAPH_SUBSTITUTE_NOTE: &str = "graph-direct uses double-centered Euclidean distances between graph signatures \
(degree histogram, vertex-label mean and spread, edge density, mean contact length) in place of a graph coverage kernel";

/// Degree-histogram bins; the last bin collects degrees >= DEGREE_BINS - 1.
const DEGREE_BINS: usize = 16;

/// How patterns are compared.
pub enum Space {
    /// Generalized Levenshtein distances, double-centered.
    Edit { patterns: Vec<Pattern>, scheme: CostScheme },
    /// Euclidean distances between feature rows, double-centered.
    Euclidean { x: DMatrix<f64> },
    /// Gaussian kernel on feature rows standardized with training statistics.
    Gaussian { x: DMatrix<f64>, sigma: f64 },
}

/// Training kernel and test-versus-training kernel rows.
pub struct KernelProblem {
    pub train: KernelMatrix,
    pub test_rows: Vec<Vec<f64>>,
}

fn rows_of(x: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), x.ncols(), |i, j| x[(idx[i], j)])
}

impl Space {
    pub fn len(&self) -> usize {
        match self {
            Space::Edit { patterns, .. } => patterns.len(),
            Space::Euclidean { x } | Space::Gaussian { x, .. } => x.nrows(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn distances(&self, idx: &[usize]) -> foldclass_core::Result<DistanceMatrix> {
        match self {
            Space::Edit { patterns, scheme } => {
                let sub: Vec<Pattern> = idx.iter().map(|&i| patterns[i].clone()).collect();
                pairwise_distances(&sub, scheme)
            }
            Space::Euclidean { x } | Space::Gaussian { x, .. } => Ok(DistanceMatrix::euclidean(&rows_of(x, idx))),
        }
    }

    pub fn kernels(&self, train: &[usize], test: &[usize]) -> foldclass_core::Result<KernelProblem> {
        match self {
            Space::Edit { patterns, scheme } => {
                let train_p: Vec<Pattern> = train.iter().map(|&i| patterns[i].clone()).collect();
                let (k, centering) = center_with_stats(&pairwise_distances(&train_p, scheme)?)?;
                let test_rows = test
                    .iter()
                    .map(|&t| kernel_row(&patterns[t], &train_p, scheme, &centering))
                    .collect::<foldclass_core::Result<_>>()?;
                Ok(KernelProblem { train: k, test_rows })
            }
            Space::Euclidean { x } => {
                let xt = rows_of(x, train);
                let (k, centering) = center_with_stats(&DistanceMatrix::euclidean(&xt))?;
                let test_rows = test
                    .iter()
                    .map(|&t| {
                        let d: Vec<f64> = (0..xt.nrows()).map(|i| (xt.row(i) - x.row(t)).norm()).collect();
                        centering.kernel_row(&d)
                    })
                    .collect::<foldclass_core::Result<_>>()?;
                Ok(KernelProblem { train: k, test_rows })
            }
            Space::Gaussian { x, sigma } => {
                let xt = rows_of(x, train);
                let (means, scales) = column_stats(&xt);
                let z = |m: &DMatrix<f64>| {
                    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] - means[j]) / scales[j])
                };
                let zt = z(&xt);
                let k = gaussian_kernel(&zt, *sigma)?;
                let test_rows = test
                    .iter()
                    .map(|&t| {
                        let probe: Vec<f64> = (0..x.ncols()).map(|j| (x[(t, j)] - means[j]) / scales[j]).collect();
                        gaussian_row(&probe, &zt, *sigma)
                    })
                    .collect::<foldclass_core::Result<_>>()?;
                Ok(KernelProblem { train: k, test_rows })
            }
        }
    }
}

/// Column means and sample standard deviations; constant columns get scale 1.
fn column_stats(x: &DMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = x.nrows() as f64;
    let means: Vec<f64> = x.column_iter().map(|c| c.sum() / n).collect();
    let scales = x
        .column_iter()
        .zip(&means)
        .map(|(c, m)| {
            let var = if x.nrows() > 1 { c.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
            if var > 0.0 {
                var.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    (means, scales)
}

/// Fixed-length structural summary of a contact graph.
pub fn graph_signature(g: &LabeledGraph, r_max: f64) -> Vec<f64> {
    let n = g.n as f64;
    let mut sig = vec![0.0; DEGREE_BINS];
    for d in g.degrees() {
        sig[d.min(DEGREE_BINS - 1)] += 1.0 / n;
    }
    for c in 0..3 {
        let mean = g.vertex_attrs.iter().map(|a| a[c]).sum::<f64>() / n;
        let var = g.vertex_attrs.iter().map(|a| (a[c] - mean).powi(2)).sum::<f64>() / n;
        sig.push(mean);
        sig.push(var.sqrt());
    }
    let pairs = n * (n - 1.0) / 2.0;
    sig.push(if pairs > 0.0 { g.edge_count() as f64 / pairs } else { 0.0 });
    let mean_w = if g.edges.is_empty() { 0.0 } else { g.edges.iter().map(|e| e.2).sum::<f64>() / g.edges.len() as f64 };
    sig.push(mean_w / r_max);
    sig
}

/// Learned-cost search on an inner split of the training proteins.
pub fn learn_cost_matrix(
    cfg: &ExperimentConfig,
    train: &[(&ResidueSequence, Label)],
    checkpoint_dir: Option<&Path>,
    resume: Option<Checkpoint>,
) -> CliResult<(CostMatrix, GaResult)> {
    let items: Vec<(String, Label)> = train.iter().map(|(s, l)| (s.protein_id.clone(), *l)).collect();
    let inner = split(&items, &SplitSpec::TrainFraction(cfg.learn.control_train_fraction), stage_seed(cfg.seed, "control-split"))
        .stage("control-split")?;
    let pick = |ids: &[String]| -> Vec<(Pattern, f64)> {
        let wanted: std::collections::HashSet<&str> = ids.iter().map(String::as_str).collect();
        train
            .iter()
            .filter(|(s, _)| wanted.contains(s.protein_id.as_str()))
            .map(|(s, l)| (Pattern::Symbols(s.residues.clone()), l.sign().expect("labeled")))
            .collect()
    };
    let mut fitness = SequenceFitness::new(
        pick(&inner.train_ids),
        pick(&inner.test_ids),
        cfg.indel,
        SvmParams::with_c(cfg.svm_c),
        cfg.learn.ga.symmetric,
    )
    .stage("evolve")?;
    fitness.balanced = cfg.learn.balanced;
    let ga = evolve::GaConfig { seed: stage_seed(cfg.seed, "ga"), ..cfg.learn.ga };
    if let Some(dir) = checkpoint_dir {
        fs::create_dir_all(dir).stage("evolve")?;
    }
    let result = evolve::run_with_checkpoints(&ga, &fitness, resume, |cp| {
        info!("generation {}: best fitness {:.4}", cp.generation, cp.best.fitness.unwrap_or(f64::NAN));
        if let Some(dir) = checkpoint_dir {
            let f = fs::File::create(dir.join(format!("gen_{:04}.json", cp.generation)))?;
            serde_json::to_writer(BufWriter::new(f), cp)?;
        }
        Ok(())
    })
    .stage("evolve")?;
    Ok((decode(&result.best, cfg.learn.ga.symmetric), result))
}

pub fn write_trace_csv(path: &Path, trace: &[f64]) -> CliResult<()> {
    let mut w = BufWriter::new(fs::File::create(path).stage("output")?);
    writeln!(w, "generation,best_fitness").stage("output")?;
    for (g, f) in trace.iter().enumerate() {
        writeln!(w, "{g},{f}").stage("output")?;
    }
    w.flush().stage("output")
}

pub fn write_cost_matrix(path: &Path, s: &CostMatrix) -> CliResult<()> {
    let f = fs::File::create(path).stage("output")?;
    s.write_text(BufWriter::new(f)).stage("output")
}

/// Inputs joined, split and turned into a comparison space.
pub struct Prepared {
    pub inputs: Inputs,
    pub dataset: &'static str,
    pub substitution: &'static str,
    pub items: Vec<(String, Label)>,
    pub split: DatasetSplit,
    pub space: Space,
    pub notes: Vec<String>,
    pub ga: Option<(CostMatrix, GaResult)>,
    pub complexity: Option<ComplexityReport>,
}

impl Prepared {
    pub fn train_indices(&self) -> Vec<usize> {
        self.split.train_indices(&self.ids())
    }

    pub fn test_indices(&self) -> Vec<usize> {
        self.split.test_indices(&self.ids())
    }

    pub fn ids(&self) -> Vec<String> {
        self.items.iter().map(|(id, _)| id.clone()).collect()
    }

    pub fn labels(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&i| self.items[i].1.sign().expect("labeled")).collect()
    }
}

pub fn prepare(cfg: &ExperimentConfig, out: Option<&Path>) -> CliResult<Prepared> {
    cfg.validate()?;
    let rep = cfg.representation;
    let inputs = load_inputs(cfg, rep.needs_graphs() || cfg.restrict_to_structures)?;
    let ds = &inputs.datasets;
    let mut notes = Vec::new();

    let (dataset, items): (&'static str, Vec<(String, Label)>) = if rep.is_sequence() {
        if cfg.restrict_to_structures {
            ("structure-sequences", ds.graph_sequences().iter().map(|s| (s.protein_id.clone(), s.label)).collect())
        } else {
            ("sequences", ds.sequences.iter().map(|s| (s.protein_id.clone(), s.label)).collect())
        }
    } else if rep == Representation::Seriated {
        ("seriated", ds.seriated.iter().map(|s| (s.protein_id.clone(), s.label)).collect())
    } else {
        ("graphs", ds.graphs.iter().map(|g| (g.protein_id.clone(), g.label)).collect())
    };
    if items.is_empty() {
        return Err(CliError::data("assemble", format!("no labeled proteins available for {rep}")));
    }
    let split = split(&items, &cfg.split.spec()?, stage_seed(cfg.seed, "split")).stage("split")?;
    if split.train_counts.len() < 2 {
        return Err(CliError::data("split", "training part must contain both classes"));
    }
    if split.test_ids.is_empty() {
        return Err(CliError::data("split", "test part is empty"));
    }

    let seq_of = |id: &str| ds.sequences.iter().find(|s| s.protein_id == id).expect("id from dataset");
    let seq_patterns = || -> Vec<Pattern> { items.iter().map(|(id, _)| Pattern::Symbols(seq_of(id).item.residues.clone())).collect() };
    let mut ga = None;
    let mut complexity = None;
    let (substitution, space) = match rep {
        Representation::Seq => ("unit", Space::Edit { patterns: seq_patterns(), scheme: scheme(Substitution::Unit, cfg)? }),
        Representation::SeqPam => {
            ("pam120", Space::Edit { patterns: seq_patterns(), scheme: scheme(Substitution::Matrix(pam120_costs()), cfg)? })
        }
        Representation::SeqLearned => {
            let s = match &cfg.cost_matrix {
                Some(p) => read_cost_matrix(p)?,
                None => {
                    let train: Vec<(&ResidueSequence, Label)> =
                        split.train_ids.iter().map(|id| (&seq_of(id).item, seq_of(id).label)).collect();
                    let (s, result) = learn_cost_matrix(cfg, &train, out.map(|o| o.join("checkpoints")).as_deref(), None)?;
                    notes.push(format!("cost matrix learned on the training part; best control fitness {}", result.best.fitness.unwrap_or(f64::NAN)));
                    ga = Some((s.clone(), result));
                    s
                }
            };
            ("learned", Space::Edit { patterns: seq_patterns(), scheme: scheme(Substitution::Matrix(s), cfg)? })
        }
        Representation::Seriated => {
            let patterns = ds.seriated.iter().map(|s| Pattern::Vectors(s.item.elements.clone())).collect();
            ("euclidean", Space::Edit { patterns, scheme: scheme(Substitution::VectorEuclidean { scale: cfg.vector_scale }, cfg)? })
        }
        Representation::GraphDirect => {
            notes.push(GRAPH_SUBSTITUTE_NOTE.to_string());
            let sigs: Vec<Vec<f64>> = ds.graphs.iter().map(|g| graph_signature(&g.item, cfg.r_max)).collect();
            let d = sigs[0].len();
            let x = DMatrix::from_fn(sigs.len(), d, |i, j| sigs[i][j]);
            ("signature", Space::Euclidean { x })
        }
        Representation::ComplexityFeatures => {
            let graphs: Vec<(String, &LabeledGraph, Label)> =
                ds.graphs.iter().map(|g| (g.protein_id.clone(), &g.item, g.label)).collect();
            let opts = AmbiguityOptions {
                budget: cfg.ambiguity_budget,
                seed: stage_seed(cfg.seed, "ambiguity"),
                ..AmbiguityOptions::default()
            };
            let report = complexity_features(&graphs, &opts).stage("complexity")?;
            let x = DMatrix::from_fn(report.rows.len(), 2, |i, j| if j == 0 { report.rows[i].entropy } else { report.rows[i].ambiguity });
            complexity = Some(report);
            ("gaussian", Space::Gaussian { x, sigma: cfg.gaussian_sigma })
        }
    };
    Ok(Prepared { inputs, dataset, substitution, items, split, space, notes, ga, complexity })
}

fn scheme(sub: Substitution, cfg: &ExperimentConfig) -> CliResult<CostScheme> {
    CostScheme::new(sub, cfg.indel).map_err(|e| CliError::config("config", e.to_string()))
}

/// Permutes training labels with a seed derived from the root seed.
pub fn shuffled_labels(labels: &[f64], root_seed: u64) -> Vec<f64> {
    let mut y = labels.to_vec();
    y.shuffle(&mut ChaCha8Rng::seed_from_u64(stage_seed(root_seed, "label-shuffle")));
    y
}

pub struct Fit {
    pub model: SvmModel,
    pub train_report: ErrorReport,
    pub test_report: ErrorReport,
}

pub fn fit_and_evaluate(kp: &KernelProblem, y_train: &[f64], y_test: &[f64], c: f64) -> CliResult<Fit> {
    let model = svm::train(&kp.train, y_train, &SvmParams::with_c(c)).stage("svm")?;
    let train_rows: Vec<Vec<f64>> = (0..kp.train.len()).map(|i| kp.train.row(i).to_vec()).collect();
    let train_report = svm::evaluate(&model, &train_rows, y_train).stage("svm")?;
    let test_report = svm::evaluate(&model, &kp.test_rows, y_test).stage("evaluate")?;
    Ok(Fit { model, train_report, test_report })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Configuration with the output directory blanked.
    pub config: ExperimentConfig,
    pub stage_seeds: BTreeMap<String, u64>,
    pub inputs: BTreeMap<String, String>,
    pub notes: Vec<String>,
    pub dataset: DatasetManifest,
}

impl RunManifest {
    pub fn hash(&self) -> String {
        provenance_hash([serde_json::to_vec(self).expect("manifest serializes").as_slice()])
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::config("manifest", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config("manifest", format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub representation: Representation,
    pub substitution: String,
    /// "none" or "shuffled-labels".
    pub control: String,
    pub report: ErrorReport,
}

pub const REPORT_HEADER: &str = "dataset,representation,substitution,control,insoluble_errors,insoluble_total,\
soluble_errors,soluble_total,insoluble_error_rate,soluble_error_rate,global_error_rate,manifest_hash";

pub fn write_report_csv(path: &Path, rows: &[ReportRow], manifest_hash: &str) -> CliResult<()> {
    let mut w = BufWriter::new(fs::File::create(path).stage("output")?);
    writeln!(w, "{REPORT_HEADER}").stage("output")?;
    for r in rows {
        let e = &r.report;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{:.4},{:.4},{:.4},{}",
            r.dataset,
            r.representation,
            r.substitution,
            r.control,
            e.insoluble_errors,
            e.insoluble_total,
            e.soluble_errors,
            e.soluble_total,
            e.insoluble_rate,
            e.soluble_rate,
            e.global_rate,
            manifest_hash
        )
        .stage("output")?;
    }
    w.flush().stage("output")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub manifest_hash: String,
    pub rows: Vec<ReportRow>,
    pub train_report: ErrorReport,
    pub svm_converged: bool,
    pub svm_indefinite: bool,
    pub kernel_is_psd: bool,
    pub train_counts: BTreeMap<Label, usize>,
    pub test_counts: BTreeMap<Label, usize>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

impl ExperimentOutcome {
    pub fn report(&self) -> &ErrorReport {
        &self.rows[0].report
    }

    pub fn shuffled(&self) -> Option<&ErrorReport> {
        self.rows.get(1).map(|r| &r.report)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let f = fs::File::create(path).stage("output")?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value).stage("output")?;
    writeln!(w).stage("output")?;
    w.flush().stage("output")
}

/// Runs one representation end to end and writes `report.csv`, `report.json`,
/// `model.json` and `manifest.json` (plus GA artifacts when costs are learned)
/// into `out`.
pub fn run_experiment(cfg: &ExperimentConfig, shuffle_control: bool, out: &Path) -> CliResult<ExperimentOutcome> {
    fs::create_dir_all(out).map_err(|e| CliError::data("output", format!("{}: {e}", out.display())))?;
    let prep = prepare(cfg, Some(out))?;
    let train_idx = prep.train_indices();
    let test_idx = prep.test_indices();
    let y_train = prep.labels(&train_idx);
    let y_test = prep.labels(&test_idx);

    let kp = prep.space.kernels(&train_idx, &test_idx).stage("kernel")?;
    let fit = fit_and_evaluate(&kp, &y_train, &y_test, cfg.svm_c)?;

    let mut stage_seeds = BTreeMap::new();
    for s in ["split", "control-split", "ga", "ambiguity", "label-shuffle"] {
        stage_seeds.insert(s.to_string(), stage_seed(cfg.seed, s));
    }
    let mut recorded = cfg.clone();
    recorded.out = PathBuf::new();
    let mut notes = prep.notes.clone();
    if shuffle_control {
        notes.push("label-shuffle control requested".into());
    }
    let manifest = RunManifest {
        tool: "foldclass".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: recorded,
        stage_seeds,
        inputs: prep.inputs.hashes.clone(),
        notes: notes.clone(),
        dataset: DatasetManifest::new(prep.dataset, &prep.items, Some(&prep.split), Some(stage_seed(cfg.seed, "split")), {
            provenance_hash(prep.inputs.hashes.values().map(|h| h.as_bytes()))
        }),
    };
    let manifest_hash = manifest.hash();

    let mut rows = vec![ReportRow {
        dataset: prep.dataset.into(),
        representation: cfg.representation,
        substitution: prep.substitution.into(),
        control: "none".into(),
        report: fit.test_report.clone(),
    }];
    if shuffle_control {
        let y_shuffled = shuffled_labels(&y_train, cfg.seed);
        let shuffled = fit_and_evaluate(&kp, &y_shuffled, &y_test, cfg.svm_c)?;
        rows.push(ReportRow { control: "shuffled-labels".into(), report: shuffled.test_report, ..rows[0].clone() });
    }

    if let Some((s, result)) = &prep.ga {
        write_cost_matrix(&out.join("learned_costs.txt"), s)?;
        write_trace_csv(&out.join("ga_trace.csv"), &result.trace)?;
    }
    if let Some(c) = &prep.complexity {
        let f = fs::File::create(out.join("complexity.csv")).stage("output")?;
        foldclass_core::complexity::write_features_csv(BufWriter::new(f), &c.rows).stage("output")?;
    }
    let outcome = ExperimentOutcome {
        manifest_hash: manifest_hash.clone(),
        rows,
        train_report: fit.train_report,
        svm_converged: fit.model.converged,
        svm_indefinite: fit.model.indefinite,
        kernel_is_psd: kp.train.is_psd,
        train_counts: prep.split.train_counts.clone(),
        test_counts: prep.split.test_counts.clone(),
        warnings: prep.inputs.datasets.warnings.clone(),
        notes,
    };
    write_report_csv(&out.join("report.csv"), &outcome.rows, &manifest_hash)?;
    write_json(&out.join("report.json"), &outcome)?;
    write_json(&out.join("manifest.json"), &manifest)?;
    let f = fs::File::create(out.join("model.json")).stage("output")?;
    fit.model.to_json(BufWriter::new(f)).stage("output")?;
    Ok(outcome)
}

/// Re-runs an experiment from its manifest after checking that every input
/// still hashes to the recorded value.
pub fn replay(manifest_path: &Path, out: &Path) -> CliResult<ExperimentOutcome> {
    let manifest = RunManifest::load(manifest_path)?;
    let current = input_hashes(&manifest.config)?;
    if current != manifest.inputs {
        let changed: Vec<&String> =
            manifest.inputs.keys().chain(current.keys()).filter(|k| manifest.inputs.get(*k) != current.get(*k)).collect();
        return Err(CliError::data("replay", format!("inputs differ from the manifest: {changed:?}")));
    }
    let shuffle = manifest.notes.iter().any(|n| n == "label-shuffle control requested");
    run_experiment(&manifest.config, shuffle, out)
}

/// Runs the pipeline with permuted training labels next to the original run.
pub fn label_shuffle_control(cfg: &ExperimentConfig, out: &Path) -> CliResult<(ErrorReport, ErrorReport)> {
    let o = run_experiment(cfg, true, out)?;
    Ok((o.report().clone(), o.shuffled().expect("shuffled row").clone()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub threshold: usize,
    pub training_errors: usize,
    pub report: ErrorReport,
}

/// Errors of the rule `length < t → soluble` on labeled lengths.
pub fn threshold_errors(data: &[(usize, Label)], t: usize) -> usize {
    data.iter().filter(|(len, label)| (*len < t) != (*label == Label::Soluble)).count()
}

/// Length-threshold classifier. The training error only changes when `t`
/// steps past a training length, so the candidates are the shortest length
/// and every length plus one; the smallest candidate with minimal training
/// error wins, as in a scan over every integer threshold.
pub fn baseline_length_classifier(train: &[(usize, Label)], test: &[(usize, Label)]) -> foldclass_core::Result<BaselineResult> {
    use foldclass_core::Error;
    if train.is_empty() || test.is_empty() {
        return Err(Error::InvalidInput("baseline needs non-empty training and test sets".into()));
    }
    if train.iter().chain(test).any(|(_, l)| *l == Label::Excluded) {
        return Err(Error::InvalidInput("baseline data contains excluded proteins".into()));
    }
    if train.iter().all(|(_, l)| *l == train[0].1) {
        return Err(Error::InvalidInput("baseline training data has a single class".into()));
    }
    let shortest = train.iter().map(|(len, _)| *len).min().unwrap();
    let mut candidates: Vec<usize> = train.iter().map(|(len, _)| len + 1).collect();
    candidates.push(shortest);
    candidates.sort_unstable();
    candidates.dedup();
    let mut best = (usize::MAX, 0);
    for &t in &candidates {
        let e = threshold_errors(train, t);
        if e < best.0 {
            best = (e, t);
        }
    }
    let (training_errors, threshold) = best;
    let predicted: Vec<f64> = test.iter().map(|(len, _)| if *len < threshold { 1.0 } else { -1.0 }).collect();
    let truth: Vec<f64> = test.iter().map(|(_, l)| l.sign().unwrap()).collect();
    Ok(BaselineResult { threshold, training_errors, report: ErrorReport::from_predictions(&predicted, &truth)? })
}

/// Splits the labeled sequences as `experiment` would and runs the length baseline.
pub fn run_baseline(cfg: &ExperimentConfig, out: &Path) -> CliResult<BaselineResult> {
    let seq_cfg = ExperimentConfig { representation: Representation::Seq, ..cfg.clone() };
    seq_cfg.validate()?;
    let inputs = load_inputs(&seq_cfg, cfg.restrict_to_structures)?;
    let pool: Vec<_> = if cfg.restrict_to_structures {
        inputs.datasets.graph_sequences().into_iter().cloned().collect()
    } else {
        inputs.datasets.sequences.clone()
    };
    let items: Vec<(String, Label)> = pool.iter().map(|s| (s.protein_id.clone(), s.label)).collect();
    let sp = split(&items, &cfg.split.spec()?, stage_seed(cfg.seed, "split")).stage("split")?;
    let ids: Vec<String> = items.iter().map(|(id, _)| id.clone()).collect();
    let pick = |idx: Vec<usize>| -> Vec<(usize, Label)> { idx.into_iter().map(|i| (pool[i].item.len(), pool[i].label)).collect() };
    let result = baseline_length_classifier(&pick(sp.train_indices(&ids)), &pick(sp.test_indices(&ids))).stage("baseline")?;

    fs::create_dir_all(out).stage("output")?;
    let mut w = BufWriter::new(fs::File::create(out.join("baseline.csv")).stage("output")?);
    writeln!(w, "threshold,training_errors,insoluble_errors,insoluble_total,soluble_errors,soluble_total,insoluble_error_rate,soluble_error_rate,global_error_rate").stage("output")?;
    let e = &result.report;
    writeln!(
        w,
        "{},{},{},{},{},{},{:.4},{:.4},{:.4}",
        result.threshold, result.training_errors, e.insoluble_errors, e.insoluble_total, e.soluble_errors, e.soluble_total,
        e.insoluble_rate, e.soluble_rate, e.global_rate
    )
    .stage("output")?;
    w.flush().stage("output")?;
    Ok(result)
}

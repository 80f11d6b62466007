use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use foldclass_core::complexity::{complexity_features, write_features_csv, AmbiguityOptions};
use foldclass_core::datamodel::alphabet::ALPHABET;
use foldclass_core::datamodel::{split, write_fasta, write_table, DatasetManifest, Label, ResidueSequence};
use foldclass_core::evolve::Checkpoint;
use foldclass_core::graphcore::{seriate, EdgeWeighting, LabeledGraph};
use foldclass_core::stats::{cca, cca_permutation_test, components_of_cost_matrix, CcaOptions, PcaResult};
use log::info;
use nalgebra::DMatrix;
use serde::Serialize;

use crate::config::{stage_seed, ExperimentConfig};
use crate::error::{CliError, CliResult, Stage};
use crate::inputs::{load_inputs, read_cost_matrix};
use crate::pipeline::{
    fit_and_evaluate, learn_cost_matrix, prepare, replay, run_baseline, run_experiment, write_cost_matrix,
    write_trace_csv,
};
use crate::{Command, StatsArgs};

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Ingest(f) => ingest(&f.common.resolve()?),
        Command::BuildGraphs(f) => build_graphs(&f.common.resolve()?),
        Command::Seriate(f) => seriate_cmd(&f.common.resolve()?),
        Command::Distances(f) => distances(&f.common.resolve()?),
        Command::Train(f) => train(&f.common.resolve()?),
        Command::Evolve(a) => evolve(&a.common.resolve()?, a.resume.as_deref()),
        Command::Complexity(f) => complexity(&f.common.resolve()?),
        Command::Stats(a) => stats(&a.common.resolve()?, &a),
        Command::Experiment(a) => {
            let cfg = a.common.resolve()?;
            let outcome = match &a.manifest {
                Some(m) => {
                    let out = a.common.out.clone().unwrap_or_else(|| cfg.out.clone());
                    replay(m, &out)?
                }
                None => run_experiment(&cfg, a.shuffle_control, &cfg.out)?,
            };
            for row in &outcome.rows {
                let e = &row.report;
                println!(
                    "{} {} ({}): insoluble {}/{} soluble {}/{} global error {:.4}",
                    row.representation,
                    row.dataset,
                    row.control,
                    e.insoluble_errors,
                    e.insoluble_total,
                    e.soluble_errors,
                    e.soluble_total,
                    e.global_rate
                );
            }
            println!("manifest {}", outcome.manifest_hash);
            Ok(())
        }
        Command::Baseline(f) => {
            let cfg = f.common.resolve()?;
            let r = run_baseline(&cfg, &cfg.out)?;
            let e = &r.report;
            println!(
                "threshold {}: insoluble {}/{} soluble {}/{} global error {:.4}",
                r.threshold, e.insoluble_errors, e.insoluble_total, e.soluble_errors, e.soluble_total, e.global_rate
            );
            Ok(())
        }
    }
}

fn out_dir(cfg: &ExperimentConfig) -> CliResult<&Path> {
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::data("output", format!("{}: {e}", cfg.out.display())))?;
    Ok(&cfg.out)
}

fn create(path: &Path) -> CliResult<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(path).map_err(|e| CliError::data("output", format!("{}: {e}", path.display())))?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).stage("output")?;
    writeln!(w).stage("output")?;
    w.flush().stage("output")
}

fn require_inputs(cfg: &ExperimentConfig) -> CliResult<()> {
    for (name, p) in [("solubility", &cfg.solubility), ("sequences", &cfg.sequences)] {
        match p {
            Some(p) if p.exists() => {}
            Some(p) => return Err(CliError::config("config", format!("{} does not exist", p.display()))),
            None => return Err(CliError::config("config", format!("{name} path is required"))),
        }
    }
    Ok(())
}

fn require_structures(cfg: &ExperimentConfig) -> CliResult<()> {
    require_inputs(cfg)?;
    match &cfg.structures {
        Some(p) if p.is_dir() => Ok(()),
        _ => Err(CliError::config("config", "a structures directory is required")),
    }
}

fn ingest(cfg: &ExperimentConfig) -> CliResult<()> {
    require_inputs(cfg)?;
    let out = out_dir(cfg)?;
    let inputs = load_inputs(cfg, false)?;
    write_table(create(&out.join("solubility.csv"))?, &inputs.records).stage("output")?;
    let labeled: Vec<ResidueSequence> = inputs.datasets.sequences.iter().map(|s| s.item.clone()).collect();
    write_fasta(create(&out.join("sequences.fasta"))?, &labeled).stage("output")?;
    let items: Vec<(String, Label)> = inputs.datasets.sequences.iter().map(|s| (s.protein_id.clone(), s.label)).collect();
    let seed = stage_seed(cfg.seed, "split");
    let sp = split(&items, &cfg.split.spec()?, seed).stage("split")?;
    let hash = foldclass_core::datamodel::provenance_hash(inputs.hashes.values().map(|h| h.as_bytes()));
    write_json(&out.join("dataset.json"), &DatasetManifest::new("sequences", &items, Some(&sp), Some(seed), hash))?;
    let count = |l: Label| inputs.records.iter().filter(|r| r.label == l).count();
    println!(
        "{} records: {} soluble, {} insoluble, {} excluded; {} labeled sequences, {} dropped",
        inputs.records.len(),
        count(Label::Soluble),
        count(Label::Insoluble),
        count(Label::Excluded),
        items.len(),
        inputs.dropped.len()
    );
    Ok(())
}

fn build_graphs(cfg: &ExperimentConfig) -> CliResult<()> {
    require_structures(cfg)?;
    let out = out_dir(cfg)?;
    let inputs = load_inputs(cfg, true)?;
    let dir = out.join("graphs");
    fs::create_dir_all(&dir).stage("output")?;
    let mut summary = create(&out.join("graphs.csv"))?;
    writeln!(summary, "protein_id,label,vertices,edges,components").stage("output")?;
    for g in &inputs.datasets.graphs {
        g.item.to_json(create(&dir.join(format!("{}.json", g.protein_id)))?).stage("output")?;
        writeln!(
            summary,
            "{},{},{},{},{}",
            g.protein_id,
            g.label.as_str(),
            g.item.n,
            g.item.edge_count(),
            g.item.components().len()
        )
        .stage("output")?;
    }
    summary.flush().stage("output")?;
    for w in &inputs.datasets.warnings {
        eprintln!("warning: {w}");
    }
    println!("{} contact graphs written to {}", inputs.datasets.graphs.len(), dir.display());
    Ok(())
}

fn seriate_cmd(cfg: &ExperimentConfig) -> CliResult<()> {
    require_structures(cfg)?;
    let out = out_dir(cfg)?;
    let inputs = load_inputs(cfg, true)?;
    write_json(&out.join("seriated.json"), &inputs.datasets.seriated)?;
    let mut summary = create(&out.join("seriation.csv"))?;
    writeln!(summary, "protein_id,label,length,components,order").stage("output")?;
    for g in &inputs.datasets.graphs {
        let s = seriate(&g.item, EdgeWeighting::Distance).stage("seriate")?;
        let order: Vec<String> = s.order.iter().map(usize::to_string).collect();
        writeln!(summary, "{},{},{},{},{}", g.protein_id, g.label.as_str(), s.order.len(), s.components, order.join(" "))
            .stage("output")?;
    }
    summary.flush().stage("output")?;
    println!("{} seriated sequences written", inputs.datasets.seriated.len());
    Ok(())
}

fn distances(cfg: &ExperimentConfig) -> CliResult<()> {
    let out = out_dir(cfg)?;
    let prep = prepare(cfg, Some(out))?;
    let all: Vec<usize> = (0..prep.items.len()).collect();
    let d = prep.space.distances(&all).stage("distances")?;
    d.write_binary(create(&out.join("distances.bin"))?).stage("output")?;
    d.write_csv(create(&out.join("distances.csv"))?).stage("output")?;
    let mut ids = create(&out.join("items.csv"))?;
    writeln!(ids, "protein_id,label").stage("output")?;
    for (id, l) in &prep.items {
        writeln!(ids, "{id},{}", l.as_str()).stage("output")?;
    }
    ids.flush().stage("output")?;
    println!("{}×{} {} distance matrix written", d.len(), d.len(), prep.substitution);
    Ok(())
}

fn train(cfg: &ExperimentConfig) -> CliResult<()> {
    let out = out_dir(cfg)?;
    let prep = prepare(cfg, Some(out))?;
    let train_idx = prep.train_indices();
    let kp = prep.space.kernels(&train_idx, &[]).stage("kernel")?;
    let y = prep.labels(&train_idx);
    let fit = fit_and_evaluate_train(&kp.train, &y, cfg.svm_c)?;
    kp.train.write_binary(create(&out.join("kernel.bin"))?).stage("output")?;
    fit.0.to_json(create(&out.join("model.json"))?).stage("output")?;
    write_json(&out.join("train_report.json"), &fit.1)?;
    println!(
        "trained on {} proteins: {} support vectors, training error {:.4}, converged {}",
        train_idx.len(),
        fit.0.support.len(),
        fit.1.global_rate,
        fit.0.converged
    );
    Ok(())
}

fn fit_and_evaluate_train(
    k: &foldclass_core::kernel::KernelMatrix,
    y: &[f64],
    c: f64,
) -> CliResult<(foldclass_core::svm::SvmModel, foldclass_core::svm::ErrorReport)> {
    let kp = crate::pipeline::KernelProblem { train: k.clone(), test_rows: (0..k.len()).map(|i| k.row(i).to_vec()).collect() };
    let fit = fit_and_evaluate(&kp, y, y, c)?;
    Ok((fit.model, fit.train_report))
}

fn evolve(cfg: &ExperimentConfig, resume: Option<&Path>) -> CliResult<()> {
    require_inputs(cfg)?;
    cfg.learn.ga.validate().map_err(|e| CliError::config("config", e.to_string()))?;
    let out = out_dir(cfg)?;
    let inputs = load_inputs(cfg, cfg.restrict_to_structures)?;
    let pool: Vec<_> = if cfg.restrict_to_structures {
        inputs.datasets.graph_sequences().into_iter().cloned().collect()
    } else {
        inputs.datasets.sequences.clone()
    };
    let items: Vec<(String, Label)> = pool.iter().map(|s| (s.protein_id.clone(), s.label)).collect();
    let sp = split(&items, &cfg.split.spec()?, stage_seed(cfg.seed, "split")).stage("split")?;
    let ids: Vec<String> = items.iter().map(|(id, _)| id.clone()).collect();
    let train: Vec<(&ResidueSequence, Label)> = sp.train_indices(&ids).into_iter().map(|i| (&pool[i].item, pool[i].label)).collect();
    let checkpoint = match resume {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::config("evolve", format!("{}: {e}", p.display())))?;
            Some(serde_json::from_str::<Checkpoint>(&text).map_err(|e| CliError::config("evolve", e.to_string()))?)
        }
        None => None,
    };
    let (s, result) = learn_cost_matrix(cfg, &train, Some(&out.join("checkpoints")), checkpoint)?;
    write_cost_matrix(&out.join("learned_costs.txt"), &s)?;
    write_trace_csv(&out.join("ga_trace.csv"), &result.trace)?;
    println!(
        "best control fitness {:.4} after {} generations{}",
        result.best.fitness.unwrap_or(f64::NAN),
        result.trace.len() - 1,
        if result.stopped_by_stagnation { " (stagnation)" } else { "" }
    );
    Ok(())
}

fn complexity(cfg: &ExperimentConfig) -> CliResult<()> {
    require_structures(cfg)?;
    let out = out_dir(cfg)?;
    let inputs = load_inputs(cfg, true)?;
    let graphs: Vec<(String, &LabeledGraph, Label)> =
        inputs.datasets.graphs.iter().map(|g| (g.protein_id.clone(), &g.item, g.label)).collect();
    let opts = AmbiguityOptions { budget: cfg.ambiguity_budget, seed: stage_seed(cfg.seed, "ambiguity"), ..Default::default() };
    let report = complexity_features(&graphs, &opts).stage("complexity")?;
    write_features_csv(create(&out.join("complexity.csv"))?, &report.rows).stage("output")?;
    write_json(&out.join("complexity_summary.json"), &report.by_class)?;
    for (label, s) in &report.by_class {
        println!(
            "{}: n={} entropy {:.4} ± {:.4}, ambiguity {:.4} ± {:.4}",
            label.as_str(),
            s.count,
            s.entropy_mean,
            s.entropy_std,
            s.ambiguity_mean,
            s.ambiguity_std
        );
    }
    Ok(())
}

fn write_pca(path: &Path, p: &PcaResult) -> CliResult<()> {
    let mut w = create(path)?;
    writeln!(w, "component,variance,explained_fraction,cumulative_fraction").stage("output")?;
    let mut cum = 0.0;
    for k in 0..p.n_components() {
        cum += p.explained_fraction[k];
        writeln!(w, "{},{},{},{}", k + 1, p.variances[k], p.explained_fraction[k], cum).stage("output")?;
    }
    w.flush().stage("output")
}

fn write_scores(path: &Path, scores: &DMatrix<f64>) -> CliResult<()> {
    let mut w = create(path)?;
    let header: Vec<String> = (1..=scores.ncols()).map(|k| format!("pc{k}")).collect();
    writeln!(w, "residue,{}", header.join(",")).stage("output")?;
    for (i, &a) in ALPHABET.iter().enumerate() {
        let row: Vec<String> = scores.row(i).iter().map(f64::to_string).collect();
        writeln!(w, "{},{}", a as char, row.join(",")).stage("output")?;
    }
    w.flush().stage("output")
}

#[derive(Serialize)]
struct StatsBundle {
    descriptors: PcaResult,
    costs: Option<PcaResult>,
    cca: Option<foldclass_core::stats::CcaResult>,
    p_values: Option<Vec<f64>>,
}

fn stats(cfg: &ExperimentConfig, args: &StatsArgs) -> CliResult<()> {
    let desc_path = cfg.descriptors.as_deref().ok_or_else(|| CliError::config("config", "stats needs a descriptor table"))?;
    let out = out_dir(cfg)?;
    let table = {
        let f = fs::File::open(desc_path).map_err(|e| CliError::data("descriptors", format!("{}: {e}", desc_path.display())))?;
        foldclass_core::datamodel::ChemPhysTable::read_csv(f).stage("descriptors")?
    };
    let desc = foldclass_core::datamodel::chemphys_components(&table, args.components).stage("pca")?;
    write_pca(&out.join("pca_descriptors.csv"), &desc.pca)?;
    write_scores(&out.join("descriptor_scores.csv"), &desc.scores)?;
    let mut bundle = StatsBundle { descriptors: desc.pca.clone(), costs: None, cca: None, p_values: None };
    println!("descriptor PCA fractions: {:?}", desc.explained_fraction.as_slice());

    if let Some(path) = &cfg.cost_matrix {
        let s = read_cost_matrix(path)?;
        let costs = components_of_cost_matrix(&s, args.cost_components, args.standardize_costs).stage("pca")?;
        write_pca(&out.join("pca_costs.csv"), &costs)?;
        write_scores(&out.join("cost_scores.csv"), &costs.scores)?;
        let opts = CcaOptions::default();
        let c = cca(&desc.scores, &costs.scores, opts).stage("cca")?;
        let p = cca_permutation_test(&desc.scores, &costs.scores, opts, args.shuffles, stage_seed(cfg.seed, "cca-permutation"))
            .stage("cca")?;
        let mut w = create(&out.join("cca.csv"))?;
        writeln!(w, "component,correlation,p_value").stage("output")?;
        for (k, (r, pv)) in c.correlations.iter().zip(&p).enumerate() {
            writeln!(w, "{},{},{}", k + 1, r, pv).stage("output")?;
        }
        w.flush().stage("output")?;
        println!("canonical correlations: {:?}", c.correlations);
        bundle.costs = Some(costs);
        bundle.cca = Some(c);
        bundle.p_values = Some(p);
    }
    write_json(&out.join("stats.json"), &bundle)?;
    info!("statistics written to {}", out.display());
    Ok(())
}

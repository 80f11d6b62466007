//! Genetic search over substitution-cost matrices.
//!
//! Genomes are points of `[0, 1]^400` read row-major as a 20×20 matrix.
//! Operators: size-3 tournament selection, uniform crossover, per-gene
//! Gaussian mutation clipped to `[0, 1]`, and elitism. The loop stops after
//! `max_iterations` generations or once the best fitness has not changed for
//! `stagnation_window` consecutive generations.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::datamodel::alphabet::ALPHABET_SIZE;
use crate::error::{Error, Result};
use crate::kernel::center_to_kernel;
use crate::seqdist::{pairwise_distances, CostMatrix, CostScheme, Pattern, Substitution};
use crate::svm::{self, ErrorReport, SvmParams};

pub const GENOME_LEN: usize = ALPHABET_SIZE * ALPHABET_SIZE;
const TOURNAMENT_SIZE: usize = 3;
const FITNESS_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Genome {
    pub genes: Vec<f64>,
    pub fitness: Option<f64>,
}

impl Genome {
    pub fn new(genes: Vec<f64>) -> Result<Self> {
        if genes.len() != GENOME_LEN {
            return Err(Error::DimensionMismatch { expected: GENOME_LEN, got: genes.len() });
        }
        if genes.iter().any(|g| !(0.0..=1.0).contains(g)) {
            return Err(Error::InvalidInput("genes must lie in [0, 1]".into()));
        }
        Ok(Genome { genes, fitness: None })
    }

    pub fn from_cost_matrix(s: &CostMatrix) -> Self {
        Genome { genes: s.entries().iter().flatten().copied().collect(), fitness: None }
    }
}

/// Reshapes the genes to 20×20, zeroes the diagonal and, if asked, averages with the transpose.
pub fn decode(genome: &Genome, symmetric: bool) -> CostMatrix {
    let mut m = [[0.0; ALPHABET_SIZE]; ALPHABET_SIZE];
    for i in 0..ALPHABET_SIZE {
        for j in 0..ALPHABET_SIZE {
            if i != j {
                m[i][j] = genome.genes[i * ALPHABET_SIZE + j];
            }
        }
    }
    if symmetric {
        for i in 0..ALPHABET_SIZE {
            for j in (i + 1)..ALPHABET_SIZE {
                let avg = 0.5 * (m[i][j] + m[j][i]);
                m[i][j] = avg;
                m[j][i] = avg;
            }
        }
    }
    CostMatrix::new(m).expect("genes in [0, 1] with zero diagonal")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub elite_count: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub mutation_scale: f64,
    pub max_iterations: usize,
    pub stagnation_window: usize,
    pub seed: u64,
    /// Symmetrize decoded matrices.
    pub symmetric: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            elite_count: 2,
            crossover_rate: 0.9,
            mutation_rate: 0.05,
            mutation_scale: 0.1,
            max_iterations: 100,
            stagnation_window: 10,
            seed: 0,
            symmetric: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.population_size < 2 {
            return bad(format!("population_size must be >= 2, got {}", self.population_size));
        }
        if self.elite_count < 1 || self.elite_count > self.population_size {
            return bad(format!("elite_count must be in 1..={}, got {}", self.population_size, self.elite_count));
        }
        for (name, r) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&r) {
                return bad(format!("{name} must be in [0, 1], got {r}"));
            }
        }
        if !(self.mutation_scale >= 0.0 && self.mutation_scale.is_finite()) {
            return bad(format!("mutation_scale must be >= 0, got {}", self.mutation_scale));
        }
        if self.max_iterations < 1 || self.stagnation_window < 1 {
            return bad("max_iterations and stagnation_window must be >= 1".into());
        }
        Ok(())
    }
}

/// Anything that scores a genome in `[0, 1]`; must be deterministic.
pub trait Fitness: Sync {
    fn evaluate(&self, genome: &Genome) -> Result<f64>;
}

impl<F> Fitness for F
where
    F: Fn(&Genome) -> Result<f64> + Sync,
{
    fn evaluate(&self, genome: &Genome) -> Result<f64> {
        self(genome)
    }
}

/// Population snapshot written after every generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub generation: usize,
    pub population: Vec<Genome>,
    pub best: Genome,
    pub trace: Vec<f64>,
    pub stagnant: usize,
    pub config: GaConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaResult {
    pub best: Genome,
    /// Best-so-far fitness after each generation (index 0 = initial population).
    pub trace: Vec<f64>,
    pub stopped_by_stagnation: bool,
}

pub fn run(config: &GaConfig, fitness: &dyn Fitness) -> Result<GaResult> {
    run_with_checkpoints(config, fitness, None, |_| Ok(()))
}

/// Generation `g` draws from its own stream derived from the seed, so a run
/// resumed from a checkpoint follows the same path as an uninterrupted one.
fn generation_rng(seed: u64, generation: usize) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(b"ga-generation");
    h.update(seed.to_le_bytes());
    h.update((generation as u64).to_le_bytes());
    let digest = h.finalize();
    ChaCha8Rng::from_seed(digest.as_slice().try_into().expect("32-byte digest"))
}

pub fn run_with_checkpoints(
    config: &GaConfig,
    fitness: &dyn Fitness,
    resume: Option<Checkpoint>,
    mut on_generation: impl FnMut(&Checkpoint) -> Result<()>,
) -> Result<GaResult> {
    config.validate()?;
    let mut state = match resume {
        Some(cp) => {
            if cp.config != *config {
                return Err(Error::InvalidParameter("checkpoint was written with a different GA configuration".into()));
            }
            cp
        }
        None => {
            let mut rng = generation_rng(config.seed, 0);
            let population: Vec<Genome> = (0..config.population_size)
                .map(|_| Genome { genes: (0..GENOME_LEN).map(|_| rng.random::<f64>()).collect(), fitness: None })
                .collect();
            let population = evaluate_all(population, fitness)?;
            let best = fittest(&population).clone();
            let cp = Checkpoint {
                generation: 0,
                trace: vec![best.fitness.unwrap()],
                population,
                best,
                stagnant: 0,
                config: *config,
            };
            on_generation(&cp)?;
            cp
        }
    };

    let mutation = Normal::new(0.0, config.mutation_scale.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    while state.generation < config.max_iterations && state.stagnant < config.stagnation_window {
        let generation = state.generation + 1;
        let mut rng = generation_rng(config.seed, generation);
        let next = breed(&state.population, config, &mutation, &mut rng);
        let population = evaluate_all(next, fitness)?;
        let gen_best = fittest(&population);
        let best_so_far = state.best.fitness.unwrap();
        if gen_best.fitness.unwrap() > best_so_far + FITNESS_EPS {
            state.best = gen_best.clone();
            state.stagnant = 0;
        } else {
            state.stagnant += 1;
        }
        state.trace.push(state.best.fitness.unwrap());
        state.population = population;
        state.generation = generation;
        on_generation(&state)?;
    }

    Ok(GaResult {
        best: state.best,
        trace: state.trace,
        stopped_by_stagnation: state.stagnant >= config.stagnation_window,
    })
}

fn evaluate_all(population: Vec<Genome>, fitness: &dyn Fitness) -> Result<Vec<Genome>> {
    population
        .into_par_iter()
        .map(|mut g| {
            if g.fitness.is_none() {
                let f = fitness.evaluate(&g)?;
                if !f.is_finite() {
                    return Err(Error::Numeric(format!("fitness evaluated to {f}")));
                }
                g.fitness = Some(f);
            }
            Ok(g)
        })
        .collect()
}

/// Highest fitness, earliest index on ties.
fn fittest(population: &[Genome]) -> &Genome {
    let mut best = &population[0];
    for g in &population[1..] {
        if g.fitness.unwrap() > best.fitness.unwrap() {
            best = g;
        }
    }
    best
}

fn ranked(population: &[Genome]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..population.len()).collect();
    idx.sort_by(|&a, &b| population[b].fitness.unwrap().total_cmp(&population[a].fitness.unwrap()).then(a.cmp(&b)));
    idx
}

fn tournament<'a>(population: &'a [Genome], rng: &mut ChaCha8Rng) -> &'a Genome {
    let mut best = &population[rng.random_range(0..population.len())];
    for _ in 1..TOURNAMENT_SIZE {
        let c = &population[rng.random_range(0..population.len())];
        if c.fitness.unwrap() > best.fitness.unwrap() {
            best = c;
        }
    }
    best
}

fn breed(population: &[Genome], config: &GaConfig, mutation: &Normal<f64>, rng: &mut ChaCha8Rng) -> Vec<Genome> {
    let mut next: Vec<Genome> = ranked(population).into_iter().take(config.elite_count).map(|i| population[i].clone()).collect();
    while next.len() < config.population_size {
        let a = tournament(population, rng);
        let b = tournament(population, rng);
        let mut genes = if rng.random::<f64>() < config.crossover_rate {
            a.genes.iter().zip(&b.genes).map(|(x, y)| if rng.random::<bool>() { *x } else { *y }).collect()
        } else {
            a.genes.clone()
        };
        for g in genes.iter_mut() {
            if rng.random::<f64>() < config.mutation_rate {
                *g = (*g + mutation.sample(rng)).clamp(0.0, 1.0);
            }
        }
        next.push(Genome { genes, fitness: None });
    }
    next
}

/// Classification accuracy of the sequence pipeline on a held-out control split.
///
/// Distances over train ∪ validation are double-centered together; the SVM is
/// trained on the train block and scored on the validation rows.
pub struct SequenceFitness {
    train: Vec<Pattern>,
    train_labels: Vec<f64>,
    validation: Vec<Pattern>,
    validation_labels: Vec<f64>,
    pub indel: f64,
    pub svm: SvmParams,
    pub symmetric: bool,
    pub balanced: bool,
    fingerprint: [u8; 32],
    cache: Mutex<HashMap<[u8; 32], f64>>,
}

impl SequenceFitness {
    pub fn new(
        train: Vec<(Pattern, f64)>,
        validation: Vec<(Pattern, f64)>,
        indel: f64,
        svm: SvmParams,
        symmetric: bool,
    ) -> Result<Self> {
        if validation.is_empty() {
            return Err(Error::InvalidInput("degenerate control split: empty validation set".into()));
        }
        let (train, train_labels): (Vec<_>, Vec<_>) = train.into_iter().unzip();
        let (validation, validation_labels): (Vec<_>, Vec<_>) = validation.into_iter().unzip();
        if train.len() < 2 || train_labels.iter().all(|&y| y == train_labels[0]) {
            return Err(Error::InvalidInput("degenerate control split: training part needs both classes".into()));
        }
        if train.iter().chain(&validation).any(|p| !matches!(p, Pattern::Symbols(_))) {
            return Err(Error::InvalidInput("control patterns must be residue sequences".into()));
        }
        let mut h = Sha256::new();
        for (p, y) in train.iter().zip(&train_labels).chain(validation.iter().zip(&validation_labels)) {
            if let Pattern::Symbols(s) = p {
                h.update((s.len() as u64).to_le_bytes());
                h.update(s);
            }
            h.update(y.to_le_bytes());
        }
        h.update((train.len() as u64).to_le_bytes());
        h.update(indel.to_le_bytes());
        h.update(serde_json::to_vec(&svm)?);
        h.update([u8::from(symmetric)]);
        let fingerprint = h.finalize().as_slice().try_into().expect("32-byte digest");
        Ok(SequenceFitness {
            train,
            train_labels,
            validation,
            validation_labels,
            indel,
            svm,
            symmetric,
            balanced: false,
            fingerprint,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn key(&self, genome: &Genome) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(self.fingerprint);
        h.update([u8::from(self.balanced)]);
        for g in &genome.genes {
            h.update(g.to_le_bytes());
        }
        h.finalize().as_slice().try_into().expect("32-byte digest")
    }

    /// Full pipeline report for an explicit cost matrix.
    pub fn report_for(&self, s: &CostMatrix) -> Result<ErrorReport> {
        let scheme = CostScheme::new(Substitution::Matrix(s.clone()), self.indel)?;
        let all: Vec<Pattern> = self.train.iter().chain(&self.validation).cloned().collect();
        let d = pairwise_distances(&all, &scheme)?;
        let k = center_to_kernel(&d)?;
        let m = self.train.len();
        let train_idx: Vec<usize> = (0..m).collect();
        let model = svm::train(&k.select(&train_idx)?, &self.train_labels, &self.svm)?;
        let rows: Vec<Vec<f64>> = (m..all.len()).map(|i| k.row(i)[..m].to_vec()).collect();
        svm::evaluate(&model, &rows, &self.validation_labels)
    }

    pub fn score_matrix(&self, s: &CostMatrix) -> Result<f64> {
        let r = self.report_for(s)?;
        Ok(if self.balanced { r.balanced_accuracy() } else { r.accuracy() })
    }

    pub fn cached_evaluations(&self) -> usize {
        self.cache.lock().expect("fitness cache poisoned").len()
    }
}

impl Fitness for SequenceFitness {
    fn evaluate(&self, genome: &Genome) -> Result<f64> {
        let key = self.key(genome);
        if let Some(&f) = self.cache.lock().expect("fitness cache poisoned").get(&key) {
            return Ok(f);
        }
        let f = self.score_matrix(&decode(genome, self.symmetric))?;
        self.cache.lock().expect("fitness cache poisoned").insert(key, f);
        Ok(f)
    }
}

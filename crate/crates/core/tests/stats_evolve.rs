use foldclass_core::datamodel::alphabet::{ALPHABET, ALPHABET_SIZE};
use foldclass_core::datamodel::{chemphys_components, ChemPhysTable};
use foldclass_core::evolve::{self, GaConfig, Genome, SequenceFitness};
use foldclass_core::seqdist::{CostMatrix, Pattern};
use foldclass_core::stats::{cca, components_of_cost_matrix, pca, CcaOptions};
use foldclass_core::svm::SvmParams;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn normal(rng: &mut ChaCha8Rng, n: usize, d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, d, |_, _| StandardNormal.sample(rng))
}

/// Eigenvalues of the sample covariance, largest first, over their sum.
fn spectrum_fractions(x: &DMatrix<f64>, standardize: bool) -> Vec<f64> {
    let n = x.nrows() as f64;
    let mut z = x.clone();
    for mut col in z.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
        if standardize {
            let sd = (col.norm_squared() / (n - 1.0)).sqrt();
            col /= sd;
        }
    }
    let cov = z.transpose() * &z / (n - 1.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(cov).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = ev.iter().sum();
    ev.iter().map(|v| v / total).collect()
}

#[test]
fn descriptor_pca_matches_direct_eigendecomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let values = normal(&mut rng, 20, 8);
    let table = ChemPhysTable::new((0..8).map(|i| format!("d{i}")).collect(), values.clone()).unwrap();
    let c = chemphys_components(&table, 3).unwrap();
    let want = spectrum_fractions(&values, true);
    for k in 0..3 {
        assert!((c.explained_fraction[k] - want[k]).abs() < 1e-9);
    }
}

#[test]
fn cost_matrix_pca_matches_direct_eigendecomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut m = [[0.0; ALPHABET_SIZE]; ALPHABET_SIZE];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i != j {
                *v = rng.random();
            }
        }
    }
    let s = CostMatrix::new(m).unwrap();
    let p = components_of_cost_matrix(&s, 7, false).unwrap();
    let want = spectrum_fractions(&s.to_dmatrix(), false);
    for k in 0..7 {
        assert!((p.explained_fraction[k] - want[k]).abs() < 1e-9);
    }
}

#[test]
fn isotropic_sample_splits_variance_evenly() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = pca(&normal(&mut rng, 10_000, 3), 3, false).unwrap();
    for f in p.explained_fraction.iter() {
        assert!((f - 1.0 / 3.0).abs() < 0.05, "{f}");
    }
}

#[test]
fn independent_blocks_have_small_correlation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let r = cca(&normal(&mut rng, 10_000, 3), &normal(&mut rng, 10_000, 3), CcaOptions::default()).unwrap();
    assert!(r.correlations[0] < 0.1, "{:?}", r.correlations);
}

/// Class is the presence of `W`; a matrix that makes W substitutions
/// expensive should separate the classes at least as well as unit costs.
#[test]
fn w_sensitive_costs_beat_unit_costs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pool = b"ACDEFGHIKLMNPQRSTVY";
    let make = |rng: &mut ChaCha8Rng, with_w: bool| -> (Pattern, f64) {
        let mut s: Vec<u8> = (0..12).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        if with_w {
            for _ in 0..3 {
                let at = rng.random_range(0..s.len());
                s[at] = b'W';
            }
        }
        (Pattern::Symbols(s), if with_w { 1.0 } else { -1.0 })
    };
    let all: Vec<(Pattern, f64)> = (0..20).map(|i| make(&mut rng, i % 2 == 0)).collect();
    let (train, validation) = (all[..14].to_vec(), all[14..].to_vec());
    let fitness = SequenceFitness::new(train, validation, 1.0, SvmParams::with_c(2.0), false).unwrap();

    let w = ALPHABET.iter().position(|&c| c == b'W').unwrap();
    let mut hand = [[0.1; ALPHABET_SIZE]; ALPHABET_SIZE];
    for i in 0..ALPHABET_SIZE {
        hand[i][i] = 0.0;
        if i != w {
            hand[i][w] = 1.0;
            hand[w][i] = 1.0;
        }
    }
    let tuned = fitness.score_matrix(&CostMatrix::new(hand).unwrap()).unwrap();
    let unit = fitness.score_matrix(&CostMatrix::unit()).unwrap();
    assert!(tuned >= unit, "{tuned} < {unit}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ga_genes_stay_in_bounds(seed in any::<u64>(), scale in 0.05f64..2.0) {
        let cfg = GaConfig { population_size: 6, max_iterations: 4, mutation_rate: 0.5, mutation_scale: scale, seed, ..Default::default() };
        let mut seen = 0;
        evolve::run_with_checkpoints(&cfg, &|g: &Genome| Ok(g.genes[0]), None, |cp| {
            for g in &cp.population {
                assert!(g.genes.len() == evolve::GENOME_LEN && g.genes.iter().all(|v| (0.0..=1.0).contains(v)));
            }
            seen += 1;
            Ok(())
        }).unwrap();
        prop_assert!(seen >= 1);
    }
}

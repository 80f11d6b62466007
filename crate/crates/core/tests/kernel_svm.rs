use foldclass_core::kernel::{center_with_stats, gaussian_kernel, kernel_row, KernelMatrix};
use foldclass_core::seqdist::{pairwise_distances, CostScheme, Pattern};
use foldclass_core::svm::{self, SvmParams};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng) -> Pattern {
    let n = rng.random_range(2..9);
    Pattern::Symbols((0..n).map(|_| b"ACDEFGHIK"[rng.random_range(0..9)]).collect())
}

/// Out-of-sample row from the training statistics of `D∘D`, written out over
/// the `(m+1)`-point matrix with the new point appended last.
fn extended_row(train: &[Pattern], test: &Pattern) -> Vec<f64> {
    let all: Vec<Pattern> = train.iter().cloned().chain([test.clone()]).collect();
    let d = pairwise_distances(&all, &CostScheme::unit()).unwrap();
    let m = train.len();
    let sq = |i: usize, j: usize| d.get(i, j).powi(2);
    let row_mean = |i: usize| (0..m).map(|j| sq(i, j)).sum::<f64>() / m as f64;
    let grand = (0..m).map(row_mean).sum::<f64>() / m as f64;
    (0..m).map(|i| -0.5 * (sq(m, i) - row_mean(m) - row_mean(i) + grand)).collect()
}

#[test]
fn out_of_sample_row_matches_extended_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let train: Vec<Pattern> = (0..5).map(|_| random_word(&mut rng)).collect();
        let test = random_word(&mut rng);
        let d = pairwise_distances(&train, &CostScheme::unit()).unwrap();
        let (k, centering) = center_with_stats(&d).unwrap();
        let row = kernel_row(&test, &train, &CostScheme::unit(), &centering).unwrap();
        for (a, b) in row.iter().zip(extended_row(&train, &test)) {
            assert!((a - b).abs() < 1e-12);
        }
        let own = kernel_row(&train[2], &train, &CostScheme::unit(), &centering).unwrap();
        for (i, v) in own.iter().enumerate() {
            assert!((v - k.get(2, i)).abs() < 1e-12);
        }
    }
}

#[test]
fn gaussian_kernel_matches_formula() {
    let x = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.5, 2.0]);
    let k = gaussian_kernel(&x, 1.0).unwrap();
    let pts = [[0.0, 0.0], [1.0, 0.0], [0.5, 2.0]];
    for i in 0..3 {
        for j in 0..3 {
            let sq: f64 = (0..2).map(|c| (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c])).sum();
            assert!((k.get(i, j) - (-sq / 2.0).exp()).abs() < 1e-15);
        }
    }
}

fn blob_problem(seed: u64, n: usize) -> (KernelMatrix, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let x = DMatrix::from_fn(n, 2, |i, c| rng.random_range(-1.5..1.5) + if c == 0 { y[i] } else { 0.0 });
    (gaussian_kernel(&x, 1.0).unwrap(), y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Scaling the kernel by `c` and the box by `1/c` leaves the decision function unchanged.
    #[test]
    fn kernel_and_box_scaling_cancel(seed in any::<u64>(), c in 0.2f64..5.0, box_c in 0.1f64..10.0) {
        let (k, y) = blob_problem(seed, 16);
        let params = SvmParams { c: box_c, tol: 1e-10, ..Default::default() };
        let a = svm::train(&k, &y, &params).unwrap();
        let b = svm::train(&k.scaled(c).unwrap(), &y, &SvmParams { c: box_c / c, ..params }).unwrap();
        for i in 0..y.len() {
            let fa = a.decision(k.row(i)).unwrap();
            let scaled: Vec<f64> = k.row(i).iter().map(|v| v * c).collect();
            let fb = b.decision(&scaled).unwrap();
            prop_assert!((fa - fb).abs() < 1e-6, "row {}: {} vs {}", i, fa, fb);
        }
    }

    #[test]
    fn multipliers_stay_in_the_box(seed in any::<u64>(), box_c in 0.05f64..5.0) {
        let (k, y) = blob_problem(seed, 20);
        let m = svm::train(&k, &y, &SvmParams::with_c(box_c)).unwrap();
        prop_assert!(m.alpha.iter().all(|&a| (0.0..=box_c + 1e-12).contains(&a)));
        let balance: f64 = m.alpha.iter().zip(&y).map(|(a, y)| a * y).sum();
        prop_assert!(balance.abs() < 1e-9);
    }
}

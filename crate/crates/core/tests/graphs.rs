use foldclass_core::complexity::{ambiguity, ambiguity_exhaustive, fuzzify_partition, AmbiguityOptions, Partition, TConorm};
use foldclass_core::graphcore::{build_contact_graph, LabeledGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn contact_edges_match_pairwise_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let pts: Vec<[f64; 3]> = (0..20).map(|_| [rng.random_range(0.0..15.0), rng.random_range(0.0..15.0), rng.random_range(0.0..15.0)]).collect();
        let g = build_contact_graph(&pts, &vec![[0.0; 3]; 20], 4.0, 8.0).unwrap();
        let mut want = Vec::new();
        for i in 0..20 {
            for j in (i + 1)..20 {
                let d = ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2) + (pts[i][2] - pts[j][2]).powi(2)).sqrt();
                if d > 4.0 && d < 8.0 {
                    want.push((i, j));
                }
            }
        }
        let got: Vec<(usize, usize)> = g.edges.iter().map(|&(i, j, _)| (i, j)).collect();
        assert_eq!(got, want);
    }
}

#[test]
fn k4_two_blocks_hand_values() {
    let edges: Vec<(usize, usize)> = (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))).collect();
    let g = LabeledGraph::from_edges(4, &edges).unwrap();
    let p = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
    let mu = fuzzify_partition(&g, &p, TConorm::Max).unwrap();
    for m in mu.memberships {
        assert!((m - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn star_ambiguity_is_positive_and_exact() {
    let g = LabeledGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    let a = ambiguity_exhaustive(&g).unwrap();
    assert!(a.value > 0.0);
    // the single block is optimal: leaves have α = 1, β = 1/4, the hub μ = 1
    let h = |p: f64| -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
    assert!((a.value - 4.0 * h(0.25) / 5.0).abs() < 1e-12, "{}", a.value);
    assert_eq!(ambiguity(&g, &AmbiguityOptions::default()).unwrap().value, a.value);
}

#[test]
fn cycle_is_unambiguous() {
    let g = LabeledGraph::from_edges(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap();
    assert_eq!(ambiguity_exhaustive(&g).unwrap().value, 0.0);
}

use foldclass_core::datamodel::alphabet::{index_of, ALPHABET_SIZE};
use foldclass_core::seqdist::pam120::PAM120;
use foldclass_core::seqdist::{levenshtein, pairwise_distances, pam120_costs, CostMatrix, CostScheme, Pattern, Sequence};
use proptest::prelude::*;

/// Minimum over every edit script, enumerated recursively from the front.
fn oracle(a: &[u8], b: &[u8], sub: &dyn Fn(u8, u8) -> f64) -> f64 {
    match (a.split_first(), b.split_first()) {
        (None, _) => b.len() as f64,
        (_, None) => a.len() as f64,
        (Some((x, ra)), Some((y, rb))) => (sub(*x, *y) + oracle(ra, rb, sub))
            .min(1.0 + oracle(ra, b, sub))
            .min(1.0 + oracle(a, rb, sub)),
    }
}

fn unit(x: u8, y: u8) -> f64 {
    if x == y {
        0.0
    } else {
        1.0
    }
}

fn lev(a: &[u8], b: &[u8], scheme: &CostScheme) -> f64 {
    levenshtein(Sequence::Symbols(a), Sequence::Symbols(b), scheme).unwrap()
}

fn word() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(proptest::sample::select(b"ACDEF".to_vec()), 0..=6)
}

fn dyadic_matrix(symmetric: bool) -> impl Strategy<Value = CostMatrix> {
    proptest::collection::vec(0u32..=32, ALPHABET_SIZE * ALPHABET_SIZE).prop_map(move |v| {
        let mut m = [[0.0; ALPHABET_SIZE]; ALPHABET_SIZE];
        for i in 0..ALPHABET_SIZE {
            for j in 0..ALPHABET_SIZE {
                if i != j {
                    let k = if symmetric { i.min(j) * ALPHABET_SIZE + i.max(j) } else { i * ALPHABET_SIZE + j };
                    m[i][j] = v[k] as f64 / 32.0;
                }
            }
        }
        CostMatrix::new(m).unwrap()
    })
}

#[test]
fn kitten_sitting() {
    assert_eq!(lev(b"kitten", b"sitting", &CostScheme::unit()), 3.0);
    assert_eq!(oracle(b"kitten", b"sitting", &unit), 3.0);
}

#[test]
fn single_matrix_substitution() {
    let mut m = [[0.0; ALPHABET_SIZE]; ALPHABET_SIZE];
    m[index_of(b'C').unwrap()][index_of(b'D').unwrap()] = 0.4;
    let s = CostMatrix::new(m).unwrap();
    let d = lev(b"AC", b"AD", &CostScheme::matrix(s.clone()));
    assert!((d - 0.4).abs() < 1e-15);
    let o = oracle(b"AC", b"AD", &|x, y| s.get(index_of(x).unwrap(), index_of(y).unwrap()));
    assert!((d - o).abs() < 1e-15);
}

#[test]
fn pairwise_matrix_matches_oracle() {
    let words: [&[u8]; 5] = [b"ACD", b"DCA", b"", b"AAEFF", b"CDEFA"];
    let patterns: Vec<Pattern> = words.iter().map(|w| Pattern::Symbols(w.to_vec())).collect();
    let d = pairwise_distances(&patterns, &CostScheme::unit()).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(d.get(i, j), oracle(words[i], words[j], &unit), "({i}, {j})");
        }
    }
}

#[test]
fn pam120_costs_are_valid() {
    let c = pam120_costs();
    let lo = PAM120.iter().flatten().copied().min().unwrap();
    let hi = PAM120.iter().flatten().copied().max().unwrap();
    for i in 0..ALPHABET_SIZE {
        assert_eq!(c.get(i, i), 0.0);
        for j in 0..ALPHABET_SIZE {
            let v = c.get(i, j);
            assert!((0.0..=1.0).contains(&v));
            assert_eq!(v, c.get(j, i));
            if i != j {
                let want = (hi - PAM120[i][j]) as f64 / (hi - lo) as f64;
                assert!((v - want).abs() < 1e-12, "({i}, {j}): {v} vs {want}");
            }
        }
    }
}

proptest! {
    #[test]
    fn unit_matches_oracle_and_is_a_metric(a in word(), b in word(), c in word()) {
        let s = CostScheme::unit();
        let ab = lev(&a, &b, &s);
        prop_assert_eq!(ab, oracle(&a, &b, &unit));
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab == 0.0, a == b);
        prop_assert_eq!(ab, lev(&b, &a, &s));
        prop_assert!(lev(&a, &c, &s) <= ab + lev(&b, &c, &s));
        prop_assert!(ab >= a.len().abs_diff(b.len()) as f64);
        prop_assert!(ab <= a.len().max(b.len()) as f64);
    }

    #[test]
    fn unit_bounded_by_hamming(a in word(), seed in any::<u64>()) {
        let b: Vec<u8> = a.iter().enumerate().map(|(i, &x)| if (seed >> (i % 64)) & 1 == 1 { b'W' } else { x }).collect();
        let hamming = a.iter().zip(&b).filter(|(x, y)| x != y).count() as f64;
        prop_assert!(lev(&a, &b, &CostScheme::unit()) <= hamming);
    }

    #[test]
    fn matrix_matches_oracle(a in word(), b in word(), m in dyadic_matrix(false)) {
        let got = lev(&a, &b, &CostScheme::matrix(m.clone()));
        let want = oracle(&a, &b, &|x, y| m.get(index_of(x).unwrap(), index_of(y).unwrap()));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn symmetric_costs_give_symmetric_distances(a in word(), b in word(), m in dyadic_matrix(true)) {
        let s = CostScheme::matrix(m);
        prop_assert_eq!(lev(&a, &b, &s), lev(&b, &a, &s));
    }

    #[test]
    fn raising_costs_never_shortens(a in word(), b in word(), m in dyadic_matrix(false)) {
        let mut raised = *m.entries();
        for (i, row) in raised.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if i != j {
                    *v = (*v + 0.25).min(1.0);
                }
            }
        }
        let low = lev(&a, &b, &CostScheme::matrix(m));
        let high = lev(&a, &b, &CostScheme::matrix(CostMatrix::new(raised).unwrap()));
        prop_assert!(high >= low);
    }

    #[test]
    fn pairwise_is_symmetric_with_zero_diagonal(words in proptest::collection::vec(word(), 1..6)) {
        let patterns: Vec<Pattern> = words.into_iter().map(Pattern::Symbols).collect();
        let d = pairwise_distances(&patterns, &CostScheme::unit()).unwrap();
        for i in 0..patterns.len() {
            prop_assert_eq!(d.get(i, i), 0.0);
            for j in 0..patterns.len() {
                prop_assert_eq!(d.get(i, j), d.get(j, i));
            }
        }
    }
}

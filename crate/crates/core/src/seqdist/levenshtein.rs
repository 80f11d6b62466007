use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cost::{CostScheme, Substitution};
use crate::datamodel::alphabet;
use crate::error::{Error, Result};
use crate::kernel::DistanceMatrix;

/// Borrowed view of one pattern.
#[derive(Debug, Clone, Copy)]
pub enum Sequence<'a> {
    Symbols(&'a [u8]),
    Vectors(&'a [[f64; 3]]),
}

impl Sequence<'_> {
    pub fn len(&self) -> usize {
        match self {
            Sequence::Symbols(s) => s.len(),
            Sequence::Vectors(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// An owned pattern, either a residue string or a seriated vector sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Pattern {
    Symbols(Vec<u8>),
    Vectors(Vec<[f64; 3]>),
}

impl Pattern {
    pub fn as_sequence(&self) -> Sequence<'_> {
        match self {
            Pattern::Symbols(s) => Sequence::Symbols(s),
            Pattern::Vectors(v) => Sequence::Vectors(v),
        }
    }
}

/// Two-row dynamic programme over an `n × m` grid of substitution costs.
fn edit_dp(n: usize, m: usize, indel: f64, sub: impl Fn(usize, usize) -> f64) -> f64 {
    let mut prev: Vec<f64> = (0..=m).map(|j| j as f64 * indel).collect();
    let mut cur = vec![0.0; m + 1];
    for i in 1..=n {
        cur[0] = i as f64 * indel;
        for j in 1..=m {
            let diag = prev[j - 1] + sub(i - 1, j - 1);
            let del = prev[j] + indel;
            let ins = cur[j - 1] + indel;
            cur[j] = diag.min(del).min(ins);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

fn symbol_indices(s: &[u8]) -> Result<Vec<usize>> {
    s.iter().map(|&c| alphabet::checked_index(c)).collect()
}

/// Minimum total cost of insertions, deletions and substitutions turning `a` into `b`.
pub fn levenshtein(a: Sequence<'_>, b: Sequence<'_>, scheme: &CostScheme) -> Result<f64> {
    let indel = scheme.indel;
    match (a, b, &scheme.substitution) {
        (Sequence::Symbols(a), Sequence::Symbols(b), Substitution::Unit) => {
            Ok(edit_dp(a.len(), b.len(), indel, |i, j| if a[i] == b[j] { 0.0 } else { 1.0 }))
        }
        (Sequence::Symbols(a), Sequence::Symbols(b), Substitution::Matrix(s)) => {
            let (ai, bi) = (symbol_indices(a)?, symbol_indices(b)?);
            Ok(edit_dp(ai.len(), bi.len(), indel, |i, j| s.get(ai[i], bi[j])))
        }
        (Sequence::Vectors(a), Sequence::Vectors(b), Substitution::VectorEuclidean { scale }) => {
            Ok(edit_dp(a.len(), b.len(), indel, |i, j| {
                let d = a[i].iter().zip(&b[j]).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                (scale * d).min(1.0)
            }))
        }
        (a, b, _) if a.is_empty() && b.is_empty() => Ok(0.0),
        _ => Err(Error::InvalidParameter("cost scheme does not match the sequence element type".into())),
    }
}

/// Distance divided by the longer length (0 for two empty sequences).
pub fn normalized_levenshtein(a: Sequence<'_>, b: Sequence<'_>, scheme: &CostScheme) -> Result<f64> {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return Ok(0.0);
    }
    Ok(levenshtein(a, b, scheme)? / longest as f64)
}

/// Symmetric distance matrix over all unordered pairs, zero diagonal.
pub fn pairwise_distances(patterns: &[Pattern], scheme: &CostScheme) -> Result<DistanceMatrix> {
    let n = patterns.len();
    if let Some(first) = patterns.first() {
        let symbols = matches!(first, Pattern::Symbols(_));
        if patterns.iter().any(|p| matches!(p, Pattern::Symbols(_)) != symbols) {
            return Err(Error::InvalidInput("patterns mix symbol and vector sequences".into()));
        }
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| levenshtein(patterns[i].as_sequence(), patterns[j].as_sequence(), scheme))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut d = vec![0.0; n * n];
    for (i, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let j = i + 1 + off;
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    DistanceMatrix::from_row_major(n, d)
}

/// Distances from one pattern to each reference pattern.
pub fn distances_to(pattern: &Pattern, references: &[Pattern], scheme: &CostScheme) -> Result<Vec<f64>> {
    references
        .par_iter()
        .map(|r| levenshtein(pattern.as_sequence(), r.as_sequence(), scheme))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdist::cost::CostMatrix;

    fn sym(s: &str) -> Sequence<'_> {
        Sequence::Symbols(s.as_bytes())
    }

    #[test]
    fn kitten_sitting() {
        assert_eq!(levenshtein(sym("kitten"), sym("sitting"), &CostScheme::unit()).unwrap(), 3.0);
    }

    #[test]
    fn identity_is_zero() {
        let s = CostScheme::unit();
        assert_eq!(levenshtein(sym("MKVLA"), sym("MKVLA"), &s).unwrap(), 0.0);
        let v = [[0.1, 0.2, 0.3], [1.0, 0.0, -1.0]];
        let e = CostScheme::euclidean(1.0).unwrap();
        assert_eq!(levenshtein(Sequence::Vectors(&v), Sequence::Vectors(&v), &e).unwrap(), 0.0);
    }

    #[test]
    fn pure_insertion() {
        let s = CostScheme::new(Substitution::Unit, 0.7).unwrap();
        assert!((levenshtein(sym(""), sym("ACDE"), &s).unwrap() - 2.8).abs() < 1e-12);
    }

    #[test]
    fn matrix_substitution() {
        let mut m = [[0.0; 20]; 20];
        let (c, d) = (alphabet::index_of(b'C').unwrap(), alphabet::index_of(b'D').unwrap());
        m[c][d] = 0.4;
        let scheme = CostScheme::matrix(CostMatrix::new(m).unwrap());
        assert_eq!(levenshtein(sym("AC"), sym("AD"), &scheme).unwrap(), 0.4);
    }

    #[test]
    fn matrix_scheme_names_bad_symbol() {
        let scheme = CostScheme::matrix(CostMatrix::unit());
        let err = levenshtein(sym("AXC"), sym("AC"), &scheme).unwrap_err();
        assert_eq!(err.to_string(), "unknown residue symbol 'X'");
    }

    #[test]
    fn euclidean_cost_is_clamped() {
        let a = [[0.0, 0.0, 0.0]];
        let b = [[3.0, 4.0, 0.0]];
        let small = CostScheme::new(Substitution::VectorEuclidean { scale: 0.1 }, 5.0).unwrap();
        assert!((levenshtein(Sequence::Vectors(&a), Sequence::Vectors(&b), &small).unwrap() - 0.5).abs() < 1e-12);
        let big = CostScheme::new(Substitution::VectorEuclidean { scale: 1.0 }, 5.0).unwrap();
        assert_eq!(levenshtein(Sequence::Vectors(&a), Sequence::Vectors(&b), &big).unwrap(), 1.0);
    }

    #[test]
    fn scheme_element_mismatch() {
        let v = [[0.0; 3]];
        assert!(levenshtein(Sequence::Vectors(&v), Sequence::Vectors(&v), &CostScheme::unit()).is_err());
    }

    #[test]
    fn pairwise_identical_is_zero() {
        let p = vec![Pattern::Symbols(b"ACD".to_vec()); 3];
        let d = pairwise_distances(&p, &CostScheme::unit()).unwrap();
        assert!(d.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pairwise_rejects_mixed_patterns() {
        let p = vec![Pattern::Symbols(b"A".to_vec()), Pattern::Vectors(vec![[0.0; 3]])];
        assert!(pairwise_distances(&p, &CostScheme::unit()).is_err());
    }

    #[test]
    fn normalized_divides_by_longest() {
        let d = normalized_levenshtein(sym("ab"), sym("abcd"), &CostScheme::unit()).unwrap();
        assert_eq!(d, 0.5);
    }
}

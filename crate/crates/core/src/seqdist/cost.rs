//! Substitution cost tables and schemes.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::datamodel::alphabet::{ALPHABET, ALPHABET_SIZE};
use crate::error::{Error, Result};

/// 20×20 substitution costs over the canonical alphabet: entries in `[0, 1]`,
/// zero diagonal. Not required to be symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostMatrix {
    entries: [[f64; ALPHABET_SIZE]; ALPHABET_SIZE],
}

impl CostMatrix {
    pub fn new(entries: [[f64; ALPHABET_SIZE]; ALPHABET_SIZE]) -> Result<Self> {
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidInput(format!("cost S[{i}][{j}] = {v} outside [0, 1]")));
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidInput(format!("cost S[{i}][{i}] = {v} on the diagonal")));
                }
            }
        }
        Ok(CostMatrix { entries })
    }

    pub fn zeros() -> Self {
        CostMatrix { entries: [[0.0; ALPHABET_SIZE]; ALPHABET_SIZE] }
    }

    /// Unit costs off the diagonal; reproduces classical Levenshtein.
    pub fn unit() -> Self {
        let mut entries = [[1.0; ALPHABET_SIZE]; ALPHABET_SIZE];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        CostMatrix { entries }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[[f64; ALPHABET_SIZE]; ALPHABET_SIZE] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..ALPHABET_SIZE).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(ALPHABET_SIZE, ALPHABET_SIZE, |i, j| self.entries[i][j])
    }

    /// Reads the 21-line text layout: alphabet header, then 20 rows of 20 reals.
    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true));
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty cost matrix file".into() })?;
        let header: String = header?.split_whitespace().collect();
        if header.as_bytes() != ALPHABET {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected alphabet header {}", std::str::from_utf8(ALPHABET).unwrap()),
            });
        }
        let mut entries = [[0.0; ALPHABET_SIZE]; ALPHABET_SIZE];
        for row in entries.iter_mut() {
            let (idx, line) = lines.next().ok_or(Error::Parse { line: 22, msg: "expected 20 cost rows".into() })?;
            let line = line?;
            let values: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse { line: idx + 1, msg: format!("{e}") })?;
            if values.len() != ALPHABET_SIZE {
                return Err(Error::Parse { line: idx + 1, msg: format!("expected 20 values, got {}", values.len()) });
            }
            row.copy_from_slice(&values);
        }
        CostMatrix::new(entries)
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", std::str::from_utf8(ALPHABET).unwrap())?;
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Substitution {
    /// 0 for equal symbols, 1 otherwise.
    Unit,
    Matrix(CostMatrix),
    /// `min(1, scale * ‖u - v‖₂)` between 3-vectors.
    VectorEuclidean { scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostScheme {
    pub substitution: Substitution,
    pub indel: f64,
}

pub const DEFAULT_INDEL: f64 = 1.0;

impl CostScheme {
    pub fn new(substitution: Substitution, indel: f64) -> Result<Self> {
        if !(indel > 0.0 && indel.is_finite()) {
            return Err(Error::InvalidParameter(format!("indel cost must be > 0, got {indel}")));
        }
        if let Substitution::VectorEuclidean { scale } = substitution {
            if !(scale > 0.0 && scale.is_finite()) {
                return Err(Error::InvalidParameter(format!("Euclidean scale must be > 0, got {scale}")));
            }
        }
        Ok(CostScheme { substitution, indel })
    }

    pub fn unit() -> Self {
        CostScheme { substitution: Substitution::Unit, indel: DEFAULT_INDEL }
    }

    pub fn matrix(m: CostMatrix) -> Self {
        CostScheme { substitution: Substitution::Matrix(m), indel: DEFAULT_INDEL }
    }

    pub fn euclidean(scale: f64) -> Result<Self> {
        CostScheme::new(Substitution::VectorEuclidean { scale }, DEFAULT_INDEL)
    }
}

/// Converts an integer similarity matrix (e.g. PAM120) into costs by
/// `c_ij = (s_max - s_ij) / (s_max - s_min)` off the diagonal, zero on it.
pub fn pam_to_costs(pam: &[[i32; ALPHABET_SIZE]; ALPHABET_SIZE]) -> Result<CostMatrix> {
    for i in 0..ALPHABET_SIZE {
        for j in 0..i {
            if pam[i][j] != pam[j][i] {
                return Err(Error::InvalidInput(format!("similarity matrix not symmetric at ({i}, {j})")));
            }
        }
    }
    let max = pam.iter().flatten().copied().max().unwrap();
    let min = pam.iter().flatten().copied().min().unwrap();
    if max == min {
        return Err(Error::DegenerateSimilarity);
    }
    let range = f64::from(max - min);
    let mut entries = [[0.0; ALPHABET_SIZE]; ALPHABET_SIZE];
    for i in 0..ALPHABET_SIZE {
        for j in 0..ALPHABET_SIZE {
            if i != j {
                entries[i][j] = f64::from(max - pam[i][j]) / range;
            }
        }
    }
    CostMatrix::new(entries)
}

/// PAM120 converted with [`pam_to_costs`].
pub fn pam120_costs() -> CostMatrix {
    pam_to_costs(&super::pam120::PAM120).expect("PAM120 is symmetric and non-constant")
}

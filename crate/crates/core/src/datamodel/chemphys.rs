use std::io::Read;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::alphabet::{index_of, ALPHABET, ALPHABET_SIZE};
use crate::error::{Error, Result};
use crate::stats::{pca, PcaResult};

/// Amino-acid descriptor table: 20 rows in canonical order, `d >= 3` columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChemPhysTable {
    pub descriptors: Vec<String>,
    pub values: DMatrix<f64>,
}

impl ChemPhysTable {
    pub fn new(descriptors: Vec<String>, values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != ALPHABET_SIZE {
            return Err(Error::InvalidInput(format!("descriptor table needs {ALPHABET_SIZE} rows, got {}", values.nrows())));
        }
        if values.ncols() < 3 {
            return Err(Error::InvalidInput(format!("descriptor table needs at least 3 columns, got {}", values.ncols())));
        }
        if descriptors.len() != values.ncols() {
            return Err(Error::DimensionMismatch { expected: values.ncols(), got: descriptors.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("descriptor table contains non-finite values".into()));
        }
        Ok(ChemPhysTable { descriptors, values })
    }

    pub fn n_descriptors(&self) -> usize {
        self.values.ncols()
    }

    /// CSV with a header row; the first column holds one-letter codes in
    /// `ACDEFGHIKLMNPQRSTVWY` order, the rest are descriptors. Empty cells are rejected.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let descriptors: Vec<String> = rdr.headers()?.iter().skip(1).map(str::to_string).collect();
        let mut data = Vec::new();
        let mut rows = 0;
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let code = rec.get(0).unwrap_or("");
            let expected = ALPHABET.get(i).map(|&b| b as char);
            let got = code.bytes().next().filter(|_| code.len() == 1).and_then(index_of);
            if got != Some(i) {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected residue {:?} in canonical order, found {code:?}", expected.unwrap_or('?')),
                });
            }
            if rec.len() != descriptors.len() + 1 {
                return Err(Error::Parse { line, msg: format!("expected {} fields, found {}", descriptors.len() + 1, rec.len()) });
            }
            for field in rec.iter().skip(1) {
                if field.is_empty() {
                    return Err(Error::Parse { line, msg: "missing descriptor value".into() });
                }
                let v: f64 = field.parse().map_err(|_| Error::Parse { line, msg: format!("bad number {field:?}") })?;
                data.push(v);
            }
            rows += 1;
        }
        let values = DMatrix::from_row_slice(rows, descriptors.len(), &data);
        ChemPhysTable::new(descriptors, values)
    }
}

/// Amino-acid scores on the leading descriptor components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChemPhysComponents {
    /// 20×k, rows in canonical residue order.
    pub scores: DMatrix<f64>,
    pub explained_fraction: DVector<f64>,
    pub pca: PcaResult,
}

impl ChemPhysComponents {
    pub fn score(&self, residue: u8) -> Option<Vec<f64>> {
        index_of(residue).map(|i| self.scores.row(i).iter().copied().collect())
    }

    /// First three component scores per residue, the vertex labels of contact graphs.
    pub fn residue_vectors(&self) -> Result<ResidueVectors> {
        if self.scores.ncols() < 3 {
            return Err(Error::InvalidParameter(format!("need 3 components for residue vectors, have {}", self.scores.ncols())));
        }
        let mut v = [[0.0; 3]; ALPHABET_SIZE];
        for (i, row) in v.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = self.scores[(i, c)];
            }
        }
        Ok(ResidueVectors(v))
    }
}

/// Column-standardized PCA of the descriptor table.
pub fn chemphys_components(table: &ChemPhysTable, k: usize) -> Result<ChemPhysComponents> {
    let p = pca(&table.values, k, true)?;
    Ok(ChemPhysComponents { scores: p.scores.clone(), explained_fraction: p.explained_fraction.clone(), pca: p })
}

/// Per-residue 3-vectors in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueVectors(pub [[f64; 3]; ALPHABET_SIZE]);

impl ResidueVectors {
    /// Unknown residues map to the origin, which is the descriptor mean after centering.
    pub fn get(&self, residue: Option<u8>) -> [f64; 3] {
        residue.and_then(index_of).map(|i| self.0[i]).unwrap_or([0.0; 3])
    }
}

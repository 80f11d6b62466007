use std::io::{Read, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DISTANCE_MAGIC: &[u8; 4] = b"DMAT";
const KERNEL_MAGIC: &[u8; 4] = b"KMAT";

/// Symmetric, non-negative, zero-diagonal pairwise dissimilarities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidInput(format!("distance diagonal entry {i} is not zero")));
            }
            for j in 0..n {
                let v = data[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidInput(format!("distance ({i}, {j}) = {v} is not a finite non-negative value")));
                }
                if v != data[j * n + i] {
                    return Err(Error::InvalidInput(format!("distance matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    /// Euclidean distances between the rows of `x`.
    pub fn euclidean(x: &DMatrix<f64>) -> Self {
        let n = x.nrows();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (x.row(i) - x.row(j)).norm();
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        DistanceMatrix { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    /// Sub-matrix over the given indices, in that order.
    pub fn select(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let mut data = Vec::with_capacity(m * m);
        for &i in idx {
            for &j in idx {
                data.push(self.get(i, j));
            }
        }
        DistanceMatrix { n: m, data }
    }

    pub fn write_binary<W: Write>(&self, w: W) -> Result<()> {
        write_square(w, DISTANCE_MAGIC, self.n, &self.data)
    }

    pub fn read_binary<R: Read>(r: R) -> Result<Self> {
        let (n, data) = read_square(r, DISTANCE_MAGIC)?;
        DistanceMatrix::from_row_major(n, data)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_square_csv(w, self.n, &self.data)
    }
}

/// Symmetric similarity (Gram) matrix. `is_psd` records whether the smallest
/// eigenvalue is above `-1e-8 * max|λ|`; the matrix is never corrected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelMatrix {
    n: usize,
    data: Vec<f64>,
    pub is_psd: bool,
}

impl KernelMatrix {
    /// Symmetrizes by `(K + Kᵀ) / 2` and computes the PSD flag.
    pub fn from_row_major(n: usize, mut data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("kernel matrix has non-finite entries".into()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        let is_psd = psd_check(n, &data);
        Ok(KernelMatrix { n, data, is_psd })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.to_dmatrix().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Sub-matrix over the given indices, in that order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                data.push(self.get(i, j));
            }
        }
        KernelMatrix::from_row_major(idx.len(), data)
    }

    /// Multiplies every entry by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        KernelMatrix::from_row_major(self.n, self.data.iter().map(|v| v * c).collect())
    }

    /// Hex SHA-256 of the row-major little-endian entries.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        for v in &self.data {
            h.update(v.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn write_binary<W: Write>(&self, w: W) -> Result<()> {
        write_square(w, KERNEL_MAGIC, self.n, &self.data)
    }

    pub fn read_binary<R: Read>(r: R) -> Result<Self> {
        let (n, data) = read_square(r, KERNEL_MAGIC)?;
        KernelMatrix::from_row_major(n, data)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_square_csv(w, self.n, &self.data)
    }
}

fn psd_check(n: usize, data: &[f64]) -> bool {
    if n == 0 {
        return true;
    }
    let eig = DMatrix::from_row_slice(n, n, data).symmetric_eigenvalues();
    let scale = eig.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    min >= -1e-8 * scale
}

// 8-byte header: 4-byte magic then the dimension as u32 LE; entries follow as f64 LE.
fn write_square<W: Write>(mut w: W, magic: &[u8; 4], n: usize, data: &[f64]) -> Result<()> {
    let n32 = u32::try_from(n).map_err(|_| Error::InvalidParameter(format!("matrix too large: {n}")))?;
    w.write_all(magic)?;
    w.write_all(&n32.to_le_bytes())?;
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_square<R: Read>(mut r: R, magic: &[u8; 4]) -> Result<(usize, Vec<f64>)> {
    let mut header = [0u8; 8];
    r.read_exact(&mut header)?;
    if &header[..4] != magic {
        return Err(Error::Parse { line: 0, msg: format!("bad magic, expected {}", String::from_utf8_lossy(magic)) });
    }
    let n = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let mut data = Vec::with_capacity(n * n);
    let mut buf = [0u8; 8];
    for _ in 0..n * n {
        r.read_exact(&mut buf)?;
        data.push(f64::from_le_bytes(buf));
    }
    Ok((n, data))
}

fn write_square_csv<W: Write>(w: W, n: usize, data: &[f64]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for i in 0..n {
        wtr.write_record(data[i * n..(i + 1) * n].iter().map(|v| format!("{v}")))?;
    }
    wtr.flush()?;
    Ok(())
}
